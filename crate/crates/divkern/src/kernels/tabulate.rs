//! Sweeps of `H` over `x` and their CSV export.

use super::h::h_eval;
use super::{KernelParams, Route};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TabulationRow {
    pub x: f64,
    pub re_h: f64,
    pub im_h: f64,
    pub route: Route,
    pub est_error: f64,
}

/// `H` at every `x`, evaluated in parallel; output order follows `xs`.
pub fn tabulate_h(p: &KernelParams, xs: &[f64]) -> Result<Vec<TabulationRow>> {
    xs.par_iter()
        .map(|&x| {
            let v = h_eval(p, x)?;
            Ok(TabulationRow {
                x,
                re_h: v.value.re,
                im_h: v.value.im,
                route: v.route,
                est_error: v.est_error,
            })
        })
        .collect()
}

/// Columns `x, re_h, im_h, route, est_error`.
pub fn write_tabulation_csv<W: Write>(rows: &[TabulationRow], w: W) -> Result<()> {
    let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["x", "re_h", "im_h", "route", "est_error"])
        .map_err(io)?;
    for r in rows {
        wr.write_record(&[
            format!("{:e}", r.x),
            format!("{:e}", r.re_h),
            format!("{:e}", r.im_h),
            r.route.as_str().to_string(),
            format!("{:e}", r.est_error),
        ])
        .map_err(io)?;
    }
    wr.flush().map_err(|e| Error::Domain(format!("csv: {e}")))?;
    Ok(())
}
