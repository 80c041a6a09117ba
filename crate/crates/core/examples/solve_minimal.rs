//! Builds the two-alternative diagram in code and solves it.
//!
//! C has lower bounds (0.5, 0.3), so 0.2 of its mass is unassigned. The
//! interval [5, 7] is the range of d1's expected value over every admitted
//! distribution; d2 pays 4 for sure and is dominated.

use iid::render;
use iid::{solve, DiagramSpec};

fn main() -> iid::Result<()> {
    let diagram = DiagramSpec::new()
        .decision("D", &["d1", "d2"], &[])
        .chance("C", &["c1", "c2"], &[], vec![vec![0.5, 0.3]])
        .value("V", &["D", "C"], vec![(10.0, 10.0), (0.0, 0.0), (4.0, 4.0), (4.0, 4.0)])
        .build()?;
    let report = solve(&diagram)?;
    print!("{}", render::solve_report(&report, true));
    Ok(())
}
