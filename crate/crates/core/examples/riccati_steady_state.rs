//! Steady-state covariances of the scalar plant and the closed-form check.

use wncs::control::{op_g, op_h, solve_riccati, PlantModel, RICCATI_MAX_ITER, RICCATI_TOL};

fn main() -> wncs::Result<()> {
    let model = PlantModel::scalar_reference();
    let sol = solve_riccati(&model, RICCATI_TOL, RICCATI_MAX_ITER)?;
    let p_pred = sol.p_pred_inf[(0, 0)];

    // P = a²PV/(P + V) + W  <=>  P² - ((a² - 1)V + W)P - WV = 0.
    let a2 = 1.13f64 * 1.13;
    let (w, v) = (1e-7, 1e-7);
    let b = (a2 - 1.0) * v + w;
    let closed = 0.5 * (b + (b * b + 4.0 * w * v).sqrt());

    println!("iterations      {}", sol.iterations);
    println!("P_pred(inf)     {p_pred:.10e}");
    println!("closed form     {closed:.10e}");
    println!("P(inf)          {:.10e}", sol.p_inf[(0, 0)]);
    println!("Sigma(inf)      {:.10e}", op_g(&model, &op_h(&model, &sol.p_inf)?)?[(0, 0)]);
    println!("residual        {:.3e}", sol.residual);
    Ok(())
}
