use serde::{Deserialize, Serialize};

use crate::exact::Rational;

/// How a density pair was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    FszDerivative,
    TransferOracle,
    MonteCarlo,
}

/// Loop densities per site on a cylinder of circumference `l = 2n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityRecord {
    pub l: u32,
    pub n: u32,
    /// Contractible loops per site.
    pub nu_c: Rational,
    /// Non-contractible loops per site.
    pub nu_nc: Rational,
    pub nu_c_float: String,
    pub nu_nc_float: String,
    pub method: Method,
}

impl DensityRecord {
    pub fn new(n: u32, nu_c: Rational, nu_nc: Rational, method: Method) -> Self {
        DensityRecord {
            l: 2 * n,
            n,
            nu_c_float: render_float(&nu_c),
            nu_nc_float: render_float(&nu_nc),
            nu_c,
            nu_nc,
            method,
        }
    }
}

/// Shortest decimal that round-trips the nearest double.
pub fn render_float(r: &Rational) -> String {
    format!("{:?}", r.to_f64())
}
