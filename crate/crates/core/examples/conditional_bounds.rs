//! Conditional MAP bounds for a fixed Gaussian prior and the limiting bounds
//! at the steady state of the scalar plant.

use wncs::bounds::{limiting_bounds, map_bounds_conditional};
use wncs::control::{op_g, op_h, solve_riccati, PlantModel, RICCATI_MAX_ITER, RICCATI_TOL};
use wncs::polar::{construct_code, weight_table, ChannelConfig};
use wncs::quant::{GaussianPrior, Quantizer, DEFAULT_EPS_MASS};

fn main() -> wncs::Result<()> {
    let model = PlantModel::scalar_reference();
    let ric = solve_riccati(&model, RICCATI_TOL, RICCATI_MAX_ITER)?;
    let code = construct_code(32, 8, 0)?;
    let wt = weight_table(&code)?;
    let q = Quantizer::new(5.0 / 256.0, 8, 1)?;
    let sigma = op_g(&model, &op_h(&model, &ric.p_inf)?)?;
    let shifted = GaussianPrior::new(model.mu_ref().add_scalar(3e-4), sigma)?;

    println!("{:>7} {:>11} {:>11} {:>11} {:>11}", "snr_db", "t1_lb", "t1_ub", "shift_lb", "shift_ub");
    for snr in [-8.0, -6.0, -4.0, -2.0, 0.0] {
        let ch = ChannelConfig::from_snr_db(snr)?;
        let t1 = limiting_bounds(&model, &ric, &wt, &ch, &q, DEFAULT_EPS_MASS)?;
        let c = map_bounds_conditional(&wt, &ch, &q, &shifted, DEFAULT_EPS_MASS)?;
        println!("{snr:>7.1} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e}", t1.lo, t1.hi, c.lo, c.hi);
    }
    Ok(())
}
