//! Higher-degree entries are peeled into a larger linear matrix whose
//! inner rank exceeds the original by the number of added rows.

use ncfield::ncrank::{linearize, ncrank};
use ncfield::ncpoly::LinearPencil;
use ncfield::ratexpr::parse_matrix;
use ncfield::Result;

fn main() -> Result<()> {
    let p = parse_matrix("x1*x2 + 1, x1; x2*x2, 0", 2)?;
    let (linear, added) = linearize(&p)?;
    println!("P =\n{p}");
    println!("linear form ({added} added rows) =\n{linear}");
    let pencil = LinearPencil::from_matrix(&linear)?;
    println!("A0 =\n{}", pencil.constant());
    let rho = ncrank(&p)?.rho;
    let rho_linear = ncrank(&linear)?.rho;
    println!("rho(P) = {rho}, rho(L) = {rho_linear} = {rho} + {added}");
    Ok(())
}
