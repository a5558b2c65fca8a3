//! Linear representations of rational expressions and their evaluation
//! at random matrices.

use ncfield::linalg;
use ncfield::randmat::{MatrixModel, ModelKind};
use ncfield::ratexpr::{eval_numeric, parse};
use ncfield::realization::{domain_check, eval_rep, realize, DEFAULT_DOMAIN_FACTOR};
use ncfield::Result;

fn main() -> Result<()> {
    // equals 1 in the free field although no factor simplifies alone
    let e = parse("x2*inv(x1*x2)*x1", 2)?;
    let rep = realize(&e, 2)?;
    println!("{e}: representation of size {}", rep.dim());
    println!("u = {}", rep.u());
    println!("v = {}", rep.v().transpose());

    for seed in 0..3 {
        let model = MatrixModel::sample(ModelKind::Ginibre, 40, 2, seed)?;
        let value = eval_rep(&rep, &model)?;
        let residual = linalg::max_abs(&(value - linalg::identity(40)));
        println!("seed {seed}: max |r(X) - 1| = {residual:.2e}");
    }

    let f = parse("inv(1 + x1*x1') + x2'", 2)?;
    let rep = realize(&f, 2)?;
    let model = MatrixModel::sample(ModelKind::Gue, 30, 2, 4)?;
    let domain = domain_check(&rep, &model, DEFAULT_DOMAIN_FACTOR)?;
    let diff = &eval_rep(&rep, &model)? - &eval_numeric(&f, model.matrices(), 30)?;
    println!(
        "{f}: size {}, sigma_min {:.3e}, agreement with direct evaluation {:.2e}",
        rep.dim(),
        domain.sigma_min,
        linalg::frobenius(&diff)
    );

    match eval_rep(&realize(&parse("inv(x1 - x1)", 1)?, 1)?, &MatrixModel::sample(ModelKind::Gue, 10, 1, 0)?) {
        Err(err) => println!("inv(x1 - x1): {err}"),
        Ok(_) => println!("inv(x1 - x1) unexpectedly evaluated"),
    }
    Ok(())
}
