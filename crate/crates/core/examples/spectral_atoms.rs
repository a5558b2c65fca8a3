//! Atoms of the spectral distribution found numerically from an evaluated
//! matrix and then certified by an inner rank computation.

use faer::c64;
use ncfield::randmat::{esd, MatrixModel, ModelKind};
use ncfield::ratexpr::parse_matrix;
use ncfield::spectra::{central_eigs_polymatrix_with, SpectraConfig};
use ncfield::Result;

fn main() -> Result<()> {
    let p = parse_matrix("x1*x1, x1*x2; x2*x1, x2*x2", 2)?;
    let cfg = SpectraConfig {
        d: 200,
        ..SpectraConfig::default()
    };
    let report = central_eigs_polymatrix_with(&p, &cfg)?;
    println!("candidate source: {:?}", report.candidate_source);
    for atom in &report.atoms {
        println!("atom at {} with mass {} (certified: {})", atom.lambda, atom.mass, atom.certified);
    }
    for w in &report.diagnostics.warnings {
        println!("warning: {w}");
    }

    let model = MatrixModel::sample(ModelKind::Gue, 200, 2, 1)?;
    let spectrum = esd(&p, &model, 20)?;
    println!("ESD mass within 1e-6 of 0: {:.3}", spectrum.mass_near(c64::new(0.0, 0.0), 1e-6));
    for (edge, mass) in spectrum.histogram.edges.iter().zip(&spectrum.histogram.mass) {
        println!("{edge:>7.3} {}", "#".repeat((mass * 100.0).round() as usize));
    }
    Ok(())
}
