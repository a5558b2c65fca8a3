//! Reading and writing pencils in the JSON exchange format used by the
//! command line tool.

use ncfield::cli::PencilFile;
use ncfield::ncrank::ncrank;
use ncfield::Result;

fn main() -> Result<()> {
    let text = r#"{
        "n_vars": 2,
        "rows": 2,
        "cols": 2,
        "coeffs": {
            "A0": [[0, 0], [0, 0]],
            "A1": [[1, 0], [0, "1/2+i"]],
            "A2": [[0, 1], [0, 0]]
        }
    }"#;
    let pencil = PencilFile::parse(text)?.to_pencil()?;
    println!("{}", pencil.to_matrix());
    println!("inner rank {}", ncrank(&pencil.to_matrix())?.rho);
    let back = serde_json::to_string(&PencilFile::from_pencil(&pencil)).expect("serializable");
    println!("{back}");

    let broken = r#"{"n_vars": 1, "rows": 1, "cols": 2, "coeffs": {"A0": [[0, 0]], "A1": [[1]]}}"#;
    if let Err(err) = PencilFile::parse(broken) {
        println!("rejected: {err}");
    }
    Ok(())
}
