//! Report emission: JSON documents or CSV with a header row.

use crate::lemmas::LemmaReport;
use clap::ValueEnum;
use divkern::arith::DivisorTable;
use divkern::kernels::{write_tabulation_csv, KernelParams, KernelValue, TabulationRow};
use divkern::quadrature::QuadratureConfig;
use divkern::report::{VerificationReport, REPORT_SCHEMA};
use divkern::specialfn::BRoute;
use divkern::{Complex64, Error, Result};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub struct Emit {
    format: Format,
    path: Option<PathBuf>,
    buf: Vec<u8>,
}

fn io(e: std::io::Error) -> Error {
    Error::Domain(format!("output: {e}"))
}

fn cjson(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn g(x: f64) -> String {
    format!("{x:e}")
}

impl Emit {
    pub fn new(format: Format, path: Option<PathBuf>) -> Emit {
        Emit {
            format,
            path,
            buf: Vec::new(),
        }
    }

    fn json(&mut self, v: &Value) -> Result<()> {
        let s = serde_json::to_string_pretty(v).map_err(|e| Error::Domain(format!("json: {e}")))?;
        writeln!(self.buf, "{s}").map_err(io)
    }

    fn csv(&mut self, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        writeln!(self.buf, "{}", header.join(",")).map_err(io)?;
        for r in rows {
            writeln!(self.buf, "{}", r.join(",")).map_err(io)?;
        }
        Ok(())
    }

    pub fn value(
        &mut self,
        kernel: &str,
        k: u32,
        z: Complex64,
        x: Complex64,
        v: &KernelValue,
        quad: Option<QuadratureConfig>,
    ) -> Result<()> {
        match self.format {
            Format::Json => self.json(&json!({
                "schema": REPORT_SCHEMA,
                "kernel": kernel,
                "k": k,
                "z": cjson(z),
                "x": cjson(x),
                "value": cjson(v.value),
                "route": v.route.as_str(),
                "est_error": v.est_error,
                "quadrature": quad,
            })),
            Format::Csv => self.csv(
                &[
                    "kernel",
                    "k",
                    "z_re",
                    "z_im",
                    "x_re",
                    "x_im",
                    "re",
                    "im",
                    "route",
                    "est_error",
                ],
                &[vec![
                    kernel.into(),
                    k.to_string(),
                    g(z.re),
                    g(z.im),
                    g(x.re),
                    g(x.im),
                    g(v.value.re),
                    g(v.value.im),
                    v.route.as_str().into(),
                    g(v.est_error),
                ]],
            ),
        }
    }

    pub fn b_value(
        &mut self,
        z: Complex64,
        b: Complex64,
        v: Complex64,
        route: BRoute,
        check: Option<f64>,
    ) -> Result<()> {
        let route = serde_json::to_value(route).map_err(|e| Error::Domain(format!("json: {e}")))?;
        let route = route.as_str().unwrap_or_default().to_string();
        match self.format {
            Format::Json => self.json(&json!({
                "schema": REPORT_SCHEMA,
                "kernel": "B",
                "z": cjson(z),
                "b": cjson(b),
                "value": cjson(v),
                "route": route,
                "est_error": check,
                "est_error_source": check.map(|_| "difference_from_defining_integral"),
                "quadrature": check.map(|_| divkern::kernels::kernel_quad()),
            })),
            Format::Csv => self.csv(
                &[
                    "kernel",
                    "z_re",
                    "z_im",
                    "b_re",
                    "b_im",
                    "re",
                    "im",
                    "route",
                    "est_error",
                ],
                &[vec![
                    "B".into(),
                    g(z.re),
                    g(z.im),
                    g(b.re),
                    g(b.im),
                    g(v.re),
                    g(v.im),
                    route,
                    check.map(g).unwrap_or_default(),
                ]],
            ),
        }
    }

    pub fn report(&mut self, r: &VerificationReport) -> Result<()> {
        match self.format {
            Format::Json => {
                let v = serde_json::to_value(r).map_err(|e| Error::Domain(format!("json: {e}")))?;
                self.json(&v)
            }
            Format::Csv => {
                let row = |terms: u64, rhs: Complex64, d: f64, pass: String| {
                    vec![
                        r.identity.clone(),
                        terms.to_string(),
                        g(r.lhs.re),
                        g(r.lhs.im),
                        g(rhs.re),
                        g(rhs.im),
                        g(d),
                        g(r.tolerances.target),
                        r.route.clone(),
                        g(r.est_error),
                        pass,
                    ]
                };
                // one row per trace level; the verdict goes on the final row
                let mut rows: Vec<Vec<String>> = r
                    .trace
                    .iter()
                    .map(|t| row(t.terms, t.rhs, t.discrepancy, String::new()))
                    .collect();
                if r.trace.last().map(|t| t.terms) == Some(r.terms) {
                    rows.pop();
                }
                rows.push(row(r.terms, r.rhs, r.discrepancy, r.pass.to_string()));
                self.csv(
                    &[
                        "identity",
                        "terms",
                        "lhs_re",
                        "lhs_im",
                        "rhs_re",
                        "rhs_im",
                        "discrepancy",
                        "tol",
                        "route",
                        "est_error",
                        "pass",
                    ],
                    &rows,
                )
            }
        }
    }

    pub fn lemmas(&mut self, r: &LemmaReport) -> Result<()> {
        match self.format {
            Format::Json => {
                let v = serde_json::to_value(r).map_err(|e| Error::Domain(format!("json: {e}")))?;
                self.json(&v)
            }
            Format::Csv => {
                let rows: Vec<Vec<String>> = r
                    .checks
                    .iter()
                    .map(|c| {
                        vec![
                            c.name.clone(),
                            g(c.discrepancy),
                            g(c.tol),
                            c.exact.to_string(),
                            c.route.clone(),
                            g(c.est_error),
                            c.pass.to_string(),
                        ]
                    })
                    .collect();
                self.csv(
                    &[
                        "check",
                        "discrepancy",
                        "tol",
                        "exact",
                        "route",
                        "est_error",
                        "pass",
                    ],
                    &rows,
                )
            }
        }
    }

    pub fn tabulation(&mut self, p: &KernelParams, rows: &[TabulationRow]) -> Result<()> {
        match self.format {
            Format::Csv => write_tabulation_csv(rows, &mut self.buf),
            Format::Json => self.json(&json!({
                "schema": REPORT_SCHEMA,
                "kernel": "H",
                "k": p.k,
                "z": cjson(p.z),
                "rows": rows,
            })),
        }
    }

    pub fn sieve(&mut self, t: &DivisorTable) -> Result<()> {
        match self.format {
            Format::Csv => t.write_csv(&mut self.buf),
            Format::Json => {
                let rows: Vec<Value> = (1..=t.limit)
                    .map(|n| json!({ "n": n, "sigma": cjson(t.sigma(n)), "s": cjson(t.s(n)) }))
                    .collect();
                self.json(&json!({ "schema": REPORT_SCHEMA, "rows": rows }))
            }
        }
    }

    pub fn finish(self) -> Result<()> {
        match &self.path {
            Some(p) => std::fs::write(p, &self.buf).map_err(io),
            None => {
                let mut o = std::io::stdout().lock();
                o.write_all(&self.buf).map_err(io)?;
                o.flush().map_err(io)
            }
        }
    }
}
