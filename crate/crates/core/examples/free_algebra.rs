//! Exact arithmetic in the free algebra with involution.

use ncfield::ratexpr::parse_poly;
use ncfield::Result;

fn main() -> Result<()> {
    let p = parse_poly("x1 + 1", 2)?;
    let q = parse_poly("x1 - 1", 2)?;
    println!("(x1+1)(x1-1) = {}", p.checked_mul(&q)?);

    let a = parse_poly("x1*x2", 2)?;
    let b = parse_poly("x2*x1", 2)?;
    println!("x1x2 - x2x1 = {}  (noncommutative)", a.checked_sub(&b)?);

    // the star reverses words and conjugates coefficients
    let r = parse_poly("(2+1i)*x1*x2' + 3", 2)?;
    println!("({r})* = {}", r.adjoint());
    let lhs = r.checked_mul(&a)?.adjoint();
    let rhs = a.adjoint().checked_mul(&r.adjoint())?;
    println!("(ra)* == a*r*: {}", lhs == rhs);
    Ok(())
}
