//! Output formatting for each subcommand.

use std::io::Write;

use chroma_core::formulas::table1_matching_rows;
use chroma_core::harness::{B1pReport, GameRecord, NonOptReport, Palette, ScanRow, Verdict};
use chroma_core::{bound_interval, bounds as all_bounds, table1_chi_g, GameState, Move, Partition, Table1, WinVector};
use serde_json::{json, Value};

use crate::Format;

type Res = Result<(), Box<dyn std::error::Error>>;

fn emit_json(out: &mut dyn Write, v: &Value) -> Res {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn csv_rows(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Res {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// One CSV record as a line, quoted as needed.
pub fn csv_line<S: AsRef<[u8]>>(fields: &[S]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(fields).expect("writing to memory");
    let bytes = w.into_inner().expect("writing to memory");
    String::from_utf8(bytes).expect("fields are utf-8").trim_end().to_string()
}

fn table1_json(t: &Table1) -> Value {
    match t.value() {
        Some(v) => json!(v),
        None => Value::Null,
    }
}

pub fn solve(wv: &WinVector, format: Format, out: &mut dyn Write) -> Res {
    let p = wv.partition();
    let table = table1_chi_g(p);
    match format {
        Format::Json => emit_json(
            out,
            &json!({
                "partition": p.sizes(),
                "chi_g": wv.chi_g(),
                "win_vector": wv.wins(),
                "table1": table1_json(&table),
                "bounds": all_bounds(p),
            }),
        ),
        Format::Csv => {
            let row = ScanRow {
                partition: p.clone(),
                n: p.n(),
                k: p.k(),
                chi_g: wv.chi_g(),
                win_vector: wv.clone(),
                agrees: table.value() == Some(wv.chi_g()),
                monotone: wv.is_monotone(),
                table1: table,
                ms: 0,
                triangle_violations: Vec::new(),
            };
            scan(std::slice::from_ref(&row), Format::Csv, out)
        }
        Format::Human => {
            writeln!(out, "K[{p}]: chi_g = {}", wv.chi_g())?;
            writeln!(out, "win vector for t = {}..={}: {}", p.k(), p.n(), wv.bitstring())?;
            let anomalies = wv.anomalies();
            if !anomalies.is_empty() {
                writeln!(out, "non-monotone: Alice loses at t = {anomalies:?} above chi_g")?;
            }
            match table.value() {
                Some(v) if v == wv.chi_g() => writeln!(out, "table value {v} agrees")?,
                Some(v) => writeln!(out, "table value {v} DISAGREES")?,
                None => writeln!(out, "table: {table}")?,
            }
            Ok(())
        }
    }
}

pub fn formula(p: &Partition, format: Format, out: &mut dyn Write) -> Res {
    let table = table1_chi_g(p);
    let row = table1_matching_rows(p).first().copied();
    match format {
        Format::Json => emit_json(
            out,
            &json!({
                "partition": p.sizes(),
                "table1": table1_json(&table),
                "row": row,
                "reason": match table { Table1::NotApplicable { reason } => Some(reason), _ => None },
            }),
        ),
        Format::Csv => csv_rows(
            out,
            &["partition", "table1"],
            &[vec![p.to_string(), table.value().map_or("n/a".into(), |v| v.to_string())]],
        ),
        Format::Human => {
            match table {
                Table1::Value { chi_g, .. } => writeln!(out, "K[{p}]: chi_g = {chi_g} ({table})")?,
                Table1::NotApplicable { reason } => writeln!(out, "K[{p}]: not applicable: {reason}")?,
            }
            Ok(())
        }
    }
}

pub fn bounds(p: &Partition, format: Format, out: &mut dyn Write) -> Res {
    let reports = all_bounds(p);
    let (lower, upper) = bound_interval(p);
    match format {
        Format::Json => emit_json(
            out,
            &json!({ "partition": p.sizes(), "lower": lower, "upper": upper, "bounds": reports }),
        ),
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|b| {
                    vec![
                        b.source.to_string(),
                        format!("{:?}", b.kind).to_lowercase(),
                        b.value.map_or(String::new(), |v| v.to_string()),
                        b.applicable.to_string(),
                        b.reason.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            csv_rows(out, &["source", "kind", "value", "applicable", "reason"], &rows)
        }
        Format::Human => {
            writeln!(out, "K[{p}]: {lower} ≤ chi_g ≤ {upper}")?;
            for b in &reports {
                writeln!(out, "  {b}")?;
            }
            Ok(())
        }
    }
}

pub fn record(r: &GameRecord, format: Format, out: &mut dyn Write) -> Res {
    match format {
        Format::Json => emit_json(out, &serde_json::to_value(r)?),
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .moves
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    vec![
                        (i + 1).to_string(),
                        m.mover.to_string(),
                        m.part.to_string(),
                        m.color.to_string(),
                        m.fresh.to_string(),
                    ]
                })
                .collect();
            csv_rows(out, &["move", "mover", "part", "color", "fresh"], &rows)
        }
        Format::Human => {
            write!(out, "{}", r.render())?;
            Ok(())
        }
    }
}

pub fn verdict(v: &Verdict, format: Format, out: &mut dyn Write) -> Res {
    match format {
        Format::Json => emit_json(out, &serde_json::to_value(v)?),
        Format::Csv => csv_rows(
            out,
            &["partition", "colors", "side", "strategy", "mode", "pass"],
            &[vec![
                v.partition.to_string(),
                v.budget.to_string(),
                v.side.to_string(),
                v.strategy.to_string(),
                format!("{:?}", v.mode).to_lowercase(),
                v.pass.to_string(),
            ]],
        ),
        Format::Human => {
            writeln!(out, "{v}")?;
            if let Some(rec) = &v.counterexample {
                writeln!(out, "counterexample:")?;
                write!(out, "{}", rec.render())?;
            }
            Ok(())
        }
    }
}

pub fn scan(rows: &[ScanRow], format: Format, out: &mut dyn Write) -> Res {
    match format {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "partition": r.partition.sizes(),
                        "n": r.n,
                        "k": r.k,
                        "chi_g": r.chi_g,
                        "table1": table1_json(&r.table1),
                        "agrees": r.agrees,
                        "monotone": r.monotone,
                        "win_vector": r.win_vector.wins(),
                        "ms": r.ms,
                    })
                })
                .collect();
            emit_json(out, &Value::Array(v))
        }
        // Human output is the CSV too: it is the most readable table form.
        Format::Csv | Format::Human => {
            chroma_core::harness::write_csv(rows, &mut *out)?;
            Ok(())
        }
    }
}

pub fn b1p(r: &B1pReport, format: Format, out: &mut dyn Write) -> Res {
    match format {
        Format::Json => emit_json(out, &serde_json::to_value(r)?),
        Format::Csv => csv_rows(
            out,
            &["partition", "colors"],
            &r.counterexamples
                .iter()
                .map(|v| vec![v.partition.to_string(), v.budget.to_string()])
                .collect::<Vec<_>>(),
        ),
        Format::Human => {
            writeln!(
                out,
                "B1' checked on {} partitions (n ≤ {}), {} budgets where optimal Bob wins: {} counterexamples",
                r.partitions_checked,
                r.max_n,
                r.budgets_checked,
                r.counterexamples.len()
            )?;
            for v in &r.counterexamples {
                writeln!(out, "{v}")?;
                if let Some(rec) = &v.counterexample {
                    write!(out, "{}", rec.render())?;
                }
            }
            writeln!(out, "{}", if r.pass() { "pass" } else { "FAIL" })?;
            Ok(())
        }
    }
}

pub fn nonopt(r: &NonOptReport, format: Format, out: &mut dyn Write) -> Res {
    match format {
        Format::Json => emit_json(out, &serde_json::to_value(r)?),
        Format::Csv => {
            let rows: Vec<Vec<String>> = std::iter::once(&r.composite)
                .chain(&r.simple)
                .map(|v| vec![v.strategy.to_string(), v.budget.to_string(), v.pass.to_string()])
                .collect();
            csv_rows(out, &["strategy", "colors", "wins"], &rows)
        }
        Format::Human => {
            writeln!(out, "K[{}]: chi_g = {} (claim: ≤ {})", r.partition, r.chi_g, r.budget)?;
            for v in std::iter::once(&r.composite).chain(&r.simple) {
                let verdict = if v.pass { "wins" } else { "does not win" };
                writeln!(out, "  {:<10} {verdict} with {} colors", v.strategy.to_string(), v.budget)?;
            }
            writeln!(out, "{}", if r.pass() { "pass" } else { "FAIL" })?;
            Ok(())
        }
    }
}

/// Per-part counts, the colors present and who started each part.
pub fn board(state: &GameState, palette: &Palette) -> String {
    let mut s = String::new();
    for (i, part) in state.parts().iter().enumerate() {
        let colors: Vec<String> = palette.colors(i).iter().map(|c| c.to_string()).collect();
        let starter = match part.starter {
            Some(p) => format!(" started by {p}"),
            None => String::new(),
        };
        s.push_str(&format!(
            "  part{i}: {}/{} colored, colors {{{}}}{starter}\n",
            part.colored,
            part.size,
            colors.join(",")
        ));
    }
    s
}

pub fn describe_move(state: &GameState, palette: &Palette, m: Move) -> String {
    if m.is_fresh() {
        format!("part{} with new color {}", m.part, state.used() + 1)
    } else {
        let c = palette.colors(m.part).first().copied().unwrap_or(0);
        format!("part{} reusing color {c}", m.part)
    }
}
