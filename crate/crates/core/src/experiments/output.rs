//! CSV rendering.
//!
//! All reals are written with 12 significant digits, rows end in `\n`.

use std::fmt::Write as _;

use crate::gkls::Trajectory;
use crate::hopfield::Pattern;

/// Formats a real with 12 significant digits, `%.12g` style.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Column labels `pattern_<bits>` for every vertex.
pub fn pattern_labels(n: usize) -> Vec<String> {
    (0..1usize << n)
        .map(|i| format!("pattern_{}", Pattern::from_index(i, n).expect("index in range")))
        .collect()
}

/// `t,pattern_<bits>...,trace_drift,min_eig,purity`.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::new();
    out.push('t');
    for label in pattern_labels(traj.n) {
        out.push(',');
        out.push_str(&label);
    }
    out.push_str(",trace_drift,min_eig,purity\n");
    for ((t, pops), d) in traj.times.iter().zip(&traj.populations).zip(&traj.diagnostics) {
        out.push_str(&fmt_real(*t));
        for &p in pops.as_slice() {
            out.push(',');
            out.push_str(&fmt_real(p));
        }
        let _ = writeln!(
            out,
            ",{},{},{}",
            fmt_real(d.trace_drift),
            fmt_real(d.min_eig),
            fmt_real(d.purity)
        );
    }
    out
}

/// `t,pattern_<bits>...` for a plain population series.
pub fn populations_csv(n: usize, times: &[f64], populations: &[Vec<f64>]) -> String {
    let mut out = String::from("t");
    for label in pattern_labels(n) {
        out.push(',');
        out.push_str(&label);
    }
    out.push('\n');
    for (t, pops) in times.iter().zip(populations) {
        out.push_str(&fmt_real(*t));
        for &p in pops {
            out.push(',');
            out.push_str(&fmt_real(p));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(0.5), "0.5");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_real(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_real(123456.789), "123456.789");
        assert_eq!(fmt_real(-1e-9), "-1e-09");
        assert_eq!(fmt_real(1.5e-13), "1.5e-13");
        assert_eq!(fmt_real(0.00012345), "0.00012345");
        assert_eq!(fmt_real(1e15), "1e+15");
        assert_eq!(fmt_real(0.999999999999999), "1");
    }

    #[test]
    fn labels() {
        assert_eq!(pattern_labels(2), vec!["pattern_00", "pattern_01", "pattern_10", "pattern_11"]);
    }
}
