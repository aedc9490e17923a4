//! Finite-blocklength normal approximation against the ML union bound for
//! the (32, 8) and (64, 16) codes.

use wncs::polar::{construct_code, ml_union_bound, normal_approximation, weight_table, ChannelConfig};

fn main() -> wncs::Result<()> {
    let c32 = weight_table(&construct_code(32, 8, 0)?)?;
    let c64 = weight_table(&construct_code(64, 16, 0)?)?;
    println!("{:>7} {:>11} {:>11} {:>11} {:>11}", "snr_db", "na(32,8)", "ub(32,8)", "na(64,16)", "ub(64,16)");
    for snr in [-6.0, -4.0, -2.0, 0.0, 2.0] {
        let ch = ChannelConfig::from_snr_db(snr)?;
        println!(
            "{snr:>7.1} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e}",
            normal_approximation(32, 8, &ch)?,
            ml_union_bound(&c32, &ch),
            normal_approximation(64, 16, &ch)?,
            ml_union_bound(&c64, &ch)
        );
    }
    Ok(())
}
