//! Fullness of homogeneous pencils by operator scaling, with exact
//! rank-decreasing witnesses for the nonfull ones.

use ncfield::ncrank::{fullness_scaling, Witness};
use ncfield::{ExactMatrix, LinearPencil, Result};

fn report(name: &str, pencil: &LinearPencil) -> Result<()> {
    let cert = fullness_scaling(pencil)?;
    println!("{name}: {:?} after {} iterations", cert.verdict, cert.iterations);
    match &cert.witness {
        Some(Witness::RankDecreasing { b, rank_b, rank_lb }) => {
            println!("  B =\n{b}  rank B = {rank_b}, rank L(B) = {rank_lb}, re-verified: {}", cert.reverify(pencil));
        }
        Some(Witness::Defect { value }) => println!("  final defect {value:.2e}"),
        Some(other) => println!("  {other:?}"),
        None => {}
    }
    Ok(())
}

fn main() -> Result<()> {
    // [[x1, x2], [-x2, x1]]
    let full = LinearPencil::homogeneous(vec![
        ExactMatrix::from_int_rows(&[&[1, 0], &[0, 1]]),
        ExactMatrix::from_int_rows(&[&[0, 1], &[-1, 0]]),
    ])?;
    report("[[x1, x2], [-x2, x1]]", &full)?;

    // the commutative determinant of an odd skew-symmetric matrix vanishes,
    // yet this pencil is full over the free field
    let skew = LinearPencil::homogeneous(vec![
        ExactMatrix::from_int_rows(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]]),
        ExactMatrix::from_int_rows(&[&[0, 0, 1], &[0, 0, 0], &[-1, 0, 0]]),
        ExactMatrix::from_int_rows(&[&[0, 0, 0], &[0, 0, 1], &[0, -1, 0]]),
    ])?;
    report("3x3 skew-symmetric", &skew)?;

    // both coefficients vanish on the last two rows and first two columns,
    // and the row mixing hides the block
    let hidden = LinearPencil::homogeneous(vec![
        ExactMatrix::from_int_rows(&[&[1, 0, 2], &[0, 0, 1], &[0, 0, 3]]),
        ExactMatrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, -1]]),
    ])?;
    let mix = ExactMatrix::from_int_rows(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
    report("hidden zero block", &hidden.congruence(&mix, &ExactMatrix::identity(3))?)
}
