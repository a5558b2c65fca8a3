//! Central eigenvalues of affine pencils, atom masses and the entropy
//! dimension.

use ncfield::ratexpr::parse_matrix;
use ncfield::spectra::{atom_masses, central_eigs_pencil, entropy_dimension};
use ncfield::{ExactMatrix, ExactScalar, LinearPencil, Result};

fn main() -> Result<()> {
    // A0 = diag(1, 2, 2) with x1 acting on the first coordinate only
    let pencil = LinearPencil::new(vec![
        ExactMatrix::from_int_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 2]]),
        ExactMatrix::from_int_rows(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]),
    ])?;
    let report = central_eigs_pencil(&pencil)?;
    for atom in &report.atoms {
        println!("lambda = {}  rho = {}  mass = {}", atom.lambda, atom.rho, atom.mass);
    }
    println!("entropy dimension: {:?}", report.entropy_dimension.map(|r| r.to_string()));

    // a full homogeneous part leaves no room for atoms
    let full = LinearPencil::new(vec![
        ExactMatrix::from_int_rows(&[&[3, 0], &[0, 5]]),
        ExactMatrix::from_int_rows(&[&[1, 0], &[0, 1]]),
        ExactMatrix::from_int_rows(&[&[0, 1], &[1, 0]]),
    ])?;
    println!("full homogeneous part: {} atoms", central_eigs_pencil(&full)?.atoms.len());

    let p = parse_matrix("x1, 0; 0, 0", 1)?;
    let masses = atom_masses(&p, &[ExactScalar::zero(), ExactScalar::one()])?;
    println!("diag(x1, 0): mass at 0 = {}, at 1 = {}", masses[0], masses[1]);
    println!("diag(x1, 0): entropy dimension = {}", entropy_dimension(&p)?);
    Ok(())
}
