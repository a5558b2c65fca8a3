//! Random matrix rank scans: the gap between inner rank and the rank
//! under a non-free substitution, and integrality of normalized ranks.

use ncfield::ncrank::ncrank;
use ncfield::randmat::{
    atiyah_integrality_scan, dykema_pascoe_matrix, dykema_pascoe_model, integrality_corpus,
    rank_convergence, rank_convergence_with, ModelKind,
};
use ncfield::Result;

fn main() -> Result<()> {
    let p = dykema_pascoe_matrix();
    println!("inner rank of [[x1, x2], [x2, x3]]: {}", ncrank(&p)?.rho);
    let dims = [20, 60, 150];
    for row in rank_convergence(&p, &dims, 0, ModelKind::Gue)? {
        println!("independent GUE   d = {:>3}: rank/d = {:.3}", row.d, row.rank_over_d);
    }
    for row in rank_convergence_with(&p, &dims, 0, dykema_pascoe_model)? {
        println!("(Y², YXY, YX²Y)   d = {:>3}: rank/d = {:.3}", row.d, row.rank_over_d);
    }

    let corpus = integrality_corpus(8, 2, 3);
    for kind in [ModelKind::Gue, ModelKind::HaarUnitary] {
        let report = atiyah_integrality_scan(&corpus, 100, 0, kind)?;
        let values: Vec<String> = report.entries.iter().map(|e| format!("{:.2}", e.rank_over_d)).collect();
        println!("{kind}: {} flagged, rank/d = [{}]", report.flagged, values.join(", "));
    }
    Ok(())
}
