use std::io::Write;

use crate::error::{Error, Result};
use crate::hilbert::LinearOperator;
use crate::spectral::{AutocovarianceSequence, SpectralDensityGrid};
use crate::transfer::CoefficientSequence;

fn csv_err(e: csv::Error) -> Error {
    Error::Format(format!("csv: {e}"))
}

fn entry_header(n: usize) -> Vec<String> {
    let mut h = Vec::with_capacity(2 * n * n);
    for i in 1..=n {
        for j in 1..=n {
            h.push(format!("e_{i}_{j}_re"));
            h.push(format!("e_{i}_{j}_im"));
        }
    }
    h
}

fn push_entries(rec: &mut Vec<String>, op: &LinearOperator) {
    let n = op.dim();
    for i in 0..n {
        for j in 0..n {
            let z = op.get(i, j);
            rec.push(format!("{:?}", z.re));
            rec.push(format!("{:?}", z.im));
        }
    }
}

/// `lambda,trace,e_1_1_re,e_1_1_im,..` per frequency.
pub fn write_density_csv<W: Write>(g: &SpectralDensityGrid, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["lambda".to_string(), "trace".to_string()];
    header.extend(entry_header(g.dim()));
    out.write_record(&header).map_err(csv_err)?;
    for ((lambda, v), tr) in g.freqs.iter().zip(&g.values).zip(g.traces()) {
        let mut rec = vec![format!("{lambda:?}"), format!("{tr:?}")];
        push_entries(&mut rec, v);
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// `h,e_1_1_re,..` for `h = −H..=H`.
pub fn write_autocov_csv<W: Write>(a: &AutocovarianceSequence, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let n = a.ops.first().map_or(0, LinearOperator::dim);
    let mut header = vec!["h".to_string()];
    header.extend(entry_header(n));
    out.write_record(&header).map_err(csv_err)?;
    let h_max = a.max_lag as i64;
    for h in -h_max..=h_max {
        let op = a.at(h).expect("lag within range");
        let mut rec = vec![h.to_string()];
        push_entries(&mut rec, op);
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Scalar real sequences as `k,value`; everything else with full entries.
pub fn write_coeffs_csv<W: Write>(c: &CoefficientSequence, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let n = c.ops.first().map_or(0, LinearOperator::dim);
    let scalar = n == 1 && c.ops.iter().all(LinearOperator::is_real);
    let mut header = vec!["k".to_string()];
    if scalar {
        header.push("value".into());
    } else {
        header.extend(entry_header(n));
    }
    out.write_record(&header).map_err(csv_err)?;
    for (k, op) in c.iter() {
        let mut rec = vec![k.to_string()];
        if scalar {
            rec.push(format!("{:?}", op.get(0, 0).re));
        } else {
            push_entries(&mut rec, op);
        }
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// `level,lambda_lo,lambda_hi,contribution` for the dyadic shells of the existence integral.
pub fn write_shells_csv<W: Write>(eta: f64, shells: &[f64], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["level", "lambda_lo", "lambda_hi", "contribution"])
        .map_err(csv_err)?;
    for (l, s) in shells.iter().enumerate() {
        let hi = eta * 0.5f64.powi(l as i32);
        out.write_record([l.to_string(), format!("{:?}", hi / 2.0), format!("{hi:?}"), format!("{s:?}")])
            .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}
