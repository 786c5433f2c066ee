//! Running time of the model at m0 = 388, k = 3 as n0 sweeps across the
//! transition. The Hard side is several orders of magnitude slower.

use splitlab::model::{run, ModelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParams::default();
    println!("n0,class,running_time");
    for n0 in (80..=130).step_by(2) {
        let t = run(388.0, n0, 3.0, &params)?;
        println!("{n0},{},{:e}", t.classification.name(), t.running_time());
    }
    Ok(())
}
