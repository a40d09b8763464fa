//! CSV and report formatting. All numbers use 17 significant digits in scientific notation.

use std::fmt::Write as _;

use nalgebra::Complex;

use crate::analysis::{AuditReport, TikhonovPoint, TikhonovSweep};
use crate::error::{Error, Result};
use crate::state::EnergyRecord;

pub const ENERGY_HEADER: &str = "t,E,V1,W2,V2,u1,ut1,p0,p1";

/// `d.dddddddddddddddde±XX`, the C `%.16e` layout.
pub fn format_sci(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.16e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn row(values: &[f64]) -> String {
    let mut line = values.iter().map(|v| format_sci(*v)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

pub fn energy_csv(records: &[EnergyRecord]) -> String {
    let mut out = format!("{ENERGY_HEADER}\n");
    for r in records {
        out.push_str(&row(&[r.t, r.e, r.v1, r.w2, r.v2, r.u1, r.ut1, r.p0, r.p1]));
    }
    out
}

/// Parses a numeric CSV with a header line.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Input("empty CSV".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .enumerate()
        .map(|(i, l)| {
            let r: Vec<f64> = l
                .split(',')
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Input(format!("CSV line {}: {e}", i + 2)))?;
            if r.len() != header.len() {
                return Err(Error::Input(format!("CSV line {}: wrong field count", i + 2)));
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;
    Ok((header, rows))
}

pub fn energy_records_from_csv(text: &str) -> Result<Vec<EnergyRecord>> {
    let (header, rows) = parse_csv(text)?;
    if header.join(",") != ENERGY_HEADER {
        return Err(Error::Input(format!("unexpected header {:?}", header.join(","))));
    }
    Ok(rows
        .into_iter()
        .map(|r| EnergyRecord {
            t: r[0],
            e: r[1],
            v1: r[2],
            w2: r[3],
            v2: r[4],
            u1: r[5],
            ut1: r[6],
            p0: r[7],
            p1: r[8],
        })
        .collect())
}

pub fn spectrum_csv(eigenvalues: &[Complex<f64>]) -> String {
    let mut out = String::from("re,im\n");
    for z in eigenvalues {
        out.push_str(&row(&[z.re, z.im]));
    }
    out
}

pub fn tikhonov_point_csv(p: &TikhonovPoint) -> String {
    let mut out = String::from("t,e_u,e_p\n");
    for ((t, u), q) in p.t_grid.iter().zip(&p.e_u).zip(&p.e_p) {
        out.push_str(&row(&[*t, *u, *q]));
    }
    out
}

pub fn tikhonov_summary_csv(s: &TikhonovSweep) -> String {
    let mut out = String::from("epsilon,e_u_sup,e_p_sup\n");
    for p in &s.points {
        out.push_str(&row(&[p.epsilon, p.e_u_max_weighted, p.e_p_max_weighted]));
    }
    out
}

pub fn slopes_txt(s: &TikhonovSweep) -> String {
    let f = |v: Option<f64>| v.map_or("nan".to_string(), format_sci);
    let mut out = format!("e_u_slope {}\ne_p_slope {}\n", f(s.slope_u), f(s.slope_p));
    for n in &s.notes {
        let _ = writeln!(out, "# {n}");
    }
    out
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

pub fn audit_csv(r: &AuditReport) -> String {
    let mut out = String::from("claim_id,verdict,measured,bound,notes\n");
    for e in &r.entries {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            e.claim_id,
            e.verdict,
            format_sci(e.measured),
            format_sci(e.bound),
            quoted(&e.notes)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scientific_layout() {
        assert_eq!(format_sci(1.2345678901234567e-3), "1.2345678901234567e-03");
        assert_eq!(format_sci(0.0), "0.0000000000000000e+00");
        assert_eq!(format_sci(-2.5 * 2f64.powi(400)), "-6.4556246952172715e+120");
        assert_eq!(format_sci(f64::NAN), "nan");
    }

    #[test]
    fn energy_round_trip() {
        let recs = vec![
            EnergyRecord {
                t: 0.1,
                e: 1.0 / 3.0,
                v1: 2e-300,
                p1: -7.0,
                ..Default::default()
            };
            3
        ];
        let csv = energy_csv(&recs);
        assert!(csv.starts_with("t,E,V1,W2,V2,u1,ut1,p0,p1\n"));
        assert!(!csv.contains('\r'));
        assert_eq!(energy_records_from_csv(&csv).unwrap(), recs);
    }

    proptest! {
        #[test]
        fn format_round_trips(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
            prop_assert_eq!(format_sci(v).parse::<f64>().unwrap(), v);
        }
    }
}
