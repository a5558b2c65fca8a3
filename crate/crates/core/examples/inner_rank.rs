//! Inner rank over the free field, cross-checked by substitution, scaling
//! and zero-pattern tests.

use ncfield::ncrank::{ncrank, ScalingStatus};
use ncfield::ratexpr::parse_matrix;
use ncfield::Result;

fn main() -> Result<()> {
    let cases = [
        ("x1, x2; x2, x3", 3),
        // column [x1; x2] times row [x2, x1]
        ("x1*x2, x1*x1; x2*x2, x2*x1", 2),
        ("x1, 0; x2, 0", 2),
        ("x1, x2, x3", 3),
    ];
    for (text, n) in cases {
        let p = parse_matrix(text, n)?;
        let r = ncrank(&p)?;
        let scaling = match &r.scaling {
            ScalingStatus::Agrees { certificate } => format!("{:?} via {:?}", certificate.verdict, certificate.method),
            ScalingStatus::Inconclusive { .. } => "inconclusive".into(),
            ScalingStatus::Skipped => "skipped".into(),
        };
        println!("[{text}]  rho = {}  full = {}  scaling: {scaling}", r.rho, r.is_full());
        for e in &r.evidence {
            println!("    d = {:>3}  rank = {:>3}  gap = {:.1e}", e.d, e.rank, e.gap_ratio);
        }
        if let Some(h) = &r.hollow {
            println!("    zero block rows {:?} cols {:?}", h.rows, h.cols);
        }
    }
    Ok(())
}
