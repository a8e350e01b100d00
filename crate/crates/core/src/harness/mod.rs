//! Playouts, guarantee checks, exhaustive scans and conjecture searches.

pub mod conjecture;
pub mod record;
pub mod scan;
pub mod verify;

pub use conjecture::{check_b1p_conjecture, check_nonoptimality_theorem, nonopt_partition, B1pReport, NonOptReport};
pub use record::{play_game, simulate, Agent, GameRecord, HumanInput, NoHuman, Palette, RecordBuilder, RecordedMove};
pub use scan::{scan, scan_with, write_csv, ScanConfig, ScanFilter, ScanRow};
pub use verify::{
    check_claim, consistency_triangle, guarantee_claims, verify_guarantee, verify_with, Claim, Rule, TriangleViolation,
    Verdict,
};
