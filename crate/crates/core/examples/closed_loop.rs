//! Runs the desk-scale closed loop for a few trials with MAP, ML and an
//! error-free link, and prints BLER and RMSE.

use std::path::Path;

use wncs::harness::{rmse, DecoderRule, ExperimentConfig, LoopOptions, Simulator};

fn main() -> wncs::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/desk.toml");
    let mut file = ExperimentConfig::from_path(&path)?.file;
    file.sim.trials = 8;
    let cfg = ExperimentConfig::from_file(file)?;
    let gamma = cfg.sim.gamma_mode;
    let sim = Simulator::new(cfg)?;

    let floor = sim.run(-4.0, &LoopOptions::new(DecoderRule::Genie, gamma))?;
    println!("error-free RMSE {:.4e}\n", rmse(&floor)?);
    println!("{:>7} {:>10} {:>10} {:>11} {:>11}", "snr_db", "bler_map", "bler_ml", "rmse_map", "rmse_ml");
    for snr in [-7.0, -5.0, -3.0] {
        let map = sim.run(snr, &LoopOptions::new(DecoderRule::Map, gamma))?;
        let ml = sim.run(snr, &LoopOptions::new(DecoderRule::Ml, gamma))?;
        println!(
            "{snr:>7.1} {:>10.3e} {:>10.3e} {:>11.4e} {:>11.4e}",
            map.bler(),
            ml.bler(),
            rmse(&map)?,
            rmse(&ml)?
        );
    }
    Ok(())
}
