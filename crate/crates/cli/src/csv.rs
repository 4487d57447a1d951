//! Trajectory CSV output.

use std::io::{self, Write};

use holonomy_core::flow::Trajectory;

pub const HEADER: &str = "t,dist_to_start,idempotency_drift,hermiticity_drift,trace";

/// Positional decimal notation with 17 significant digits, independent of
/// locale. Zero is written as `0`.
pub fn format_decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if x < 0.0 { "-" } else { "" };

    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            format!("{}{}", digits, "0".repeat(int_len - digits.len()))
        } else {
            format!("{}.{}", &digits[..int_len], &digits[int_len..])
        }
    };
    format!("{sign}{body}")
}

pub fn write_trajectory<W: Write>(out: &mut W, traj: &Trajectory) -> io::Result<()> {
    out.write_all(HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for (j, (&t, &dist)) in traj.times().iter().zip(traj.distances()).enumerate() {
        let defects = traj.defects(j);
        let trace = traj.samples()[j].trace().re;
        let row = [t, dist, defects.idempotency, defects.hermiticity, trace]
            .map(format_decimal)
            .join(",");
        out.write_all(row.as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
