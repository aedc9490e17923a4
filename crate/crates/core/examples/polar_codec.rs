//! Encodes payloads with the (8, 4) and (32, 8) polar codes and prints the
//! distance spectrum.

use wncs::polar::{construct_code, weight_table, Codebook, Crc};

fn main() -> wncs::Result<()> {
    let small = construct_code(8, 4, 0)?;
    println!("(8,4) information positions {:?}", small.unfrozen_set());
    for p in [0b0001u64, 0b1000, 0b1111] {
        let bits: Vec<u8> = (0..4).rev().map(|i| ((p >> i) & 1) as u8).collect();
        println!("  b = {bits:?}  c = {:?}", small.encode(&bits)?);
    }

    let crc = Crc::new(16, wncs::polar::CRC16_5G_POLY)?;
    println!("\nCRC-16 of \"123456789\": {:#06x}", crc.remainder(&ascii_bits(b"123456789")));

    let code = construct_code(32, 8, 0)?;
    let book = Codebook::new(&code)?;
    let wt = weight_table(&code)?;
    println!("\n(32,8): {} codewords, d_min = {}", book.len(), wt.min_distance());
    for (d, count) in wt.spectrum() {
        println!("  A_{d:<2} = {count}");
    }
    Ok(())
}

fn ascii_bits(s: &[u8]) -> Vec<u8> {
    s.iter().flat_map(|&byte| (0..8).rev().map(move |i| (byte >> i) & 1)).collect()
}
