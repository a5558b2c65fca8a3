//! Exact check of the dual system of the free group on a truncated ball.

use ncfield::freegroup::{dual_check, dual_op, left_regular, GroupBall};
use ncfield::Result;

fn main() -> Result<()> {
    let ball = GroupBall::build(2, 2)?;
    println!("ball of radius 2 in F2 has {} words", ball.len());
    let (u, v) = (left_regular(1, &ball)?, dual_op(1, &ball)?);
    println!("U1 has {} nonzero entries, D1 has {}", u.entries().count(), v.entries().count());

    for (n, radius) in [(1, 4), (2, 6), (3, 4)] {
        let report = dual_check(n, radius)?;
        println!(
            "n = {n}, R = {radius}: {} words, {} interior, all pairs exact: {}",
            report.ball_size, report.interior_count, report.all_pass
        );
    }
    Ok(())
}
