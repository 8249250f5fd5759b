//! Suite configuration: a TOML file of flat sections and lists.

use num_complex::Complex;
use serde::Deserialize;

use crate::catalog;
use crate::cgl::CglConfig;
use crate::error::{Error, Result};
use crate::harness::{check_theta, EstimateSweep};
use crate::scalar::{parse_complex, Exponent};

pub const DEFAULT_CONFIG: &str = include_str!("../../configs/default.toml");

/// Harness names accepted in `harnesses`.
pub const HARNESSES: [&str; 9] = [
    "identity",
    "shift",
    "estimate",
    "radial",
    "lipschitz",
    "kernel-chain",
    "holder",
    "constants",
    "cgl",
];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub harnesses: Vec<String>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub identity: IdentitySection,
    #[serde(default)]
    pub estimate: EstimateSection,
    #[serde(default)]
    pub constants: ConstantsSection,
    #[serde(default)]
    pub cgl: CglSection,
}

fn default_seed() -> u64 {
    2024
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IdentitySection {
    pub dims: Vec<usize>,
    pub max_order: u32,
    pub shift_max_order: u32,
    pub omegas: Vec<String>,
    pub testfns: Vec<String>,
    pub half_width: f64,
    /// Points per axis, indexed by dimension − 1.
    pub points: Vec<usize>,
}

impl Default for IdentitySection {
    fn default() -> Self {
        Self {
            dims: vec![1, 2],
            max_order: 4,
            shift_max_order: 3,
            omegas: vec!["1,0".into(), "0.5,0".into(), "1,1".into(), "0.5,-0.5".into()],
            testfns: vec!["gauss".into(), "gauss-shifted".into(), "mixture".into()],
            half_width: 16.0,
            points: vec![512, 256, 64],
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimateSection {
    pub dims: Vec<usize>,
    pub orders: Vec<u32>,
    /// `"p,q"` pairs.
    pub pairs: Vec<String>,
    pub omegas: Vec<String>,
    pub testfns: Vec<String>,
    pub random_mixtures: usize,
    pub chain_max_order: u32,
    pub chain_thetas: Vec<f64>,
    pub chain_rs: Vec<String>,
    pub holder_max_m: u32,
}

impl Default for EstimateSection {
    fn default() -> Self {
        Self {
            dims: vec![1],
            orders: vec![1, 2, 3],
            pairs: ["1,1", "2,1", "inf,1", "2,2", "inf,2", "inf,inf"]
                .map(String::from)
                .to_vec(),
            omegas: vec!["1,0".into(), "1,0.9".into()],
            testfns: vec!["gauss".into(), "gauss-shifted".into(), "mixture".into()],
            random_mixtures: 100,
            chain_max_order: 4,
            chain_thetas: vec![0.0, 0.5, 1.0, -1.2],
            chain_rs: ["1", "2", "inf"].map(String::from).to_vec(),
            holder_max_m: 4,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstantsSection {
    pub dims: Vec<usize>,
    pub orders: Vec<u32>,
    pub rs: Vec<String>,
    pub thetas: Vec<f64>,
}

impl Default for ConstantsSection {
    fn default() -> Self {
        Self {
            dims: vec![1, 2, 3],
            orders: vec![1, 2, 3],
            rs: ["1", "2", "inf"].map(String::from).to_vec(),
            thetas: vec![0.0, 0.5, 1.0, 1.5],
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CglSection {
    pub nu: String,
    pub lambda: String,
    pub p: f64,
    pub eps: f64,
    pub sigma: f64,
    pub t_end: f64,
    pub dt: f64,
    pub sample_every: f64,
    pub smallness: f64,
    pub orders: Vec<u32>,
    pub q: String,
    pub points: usize,
    pub half_width: f64,
}

impl Default for CglSection {
    fn default() -> Self {
        let d = CglConfig::<f64>::default();
        Self {
            nu: "1,0".into(),
            lambda: "-1,0".into(),
            p: d.p,
            eps: 0.01,
            sigma: 1.0,
            t_end: d.t_end,
            dt: d.dt,
            sample_every: d.sample_every,
            smallness: d.smallness,
            orders: vec![1, 2],
            q: "1".into(),
            points: 4096,
            half_width: 192.0,
        }
    }
}

impl CglSection {
    pub fn config(&self) -> Result<CglConfig<f64>> {
        Ok(CglConfig {
            nu: parse_complex(&self.nu)?,
            lambda: parse_complex(&self.lambda)?,
            p: self.p,
            dt: self.dt,
            t_end: self.t_end,
            sample_every: self.sample_every,
            smallness: self.smallness,
        })
    }
}

pub fn parse_omegas(values: &[String]) -> Result<Vec<Complex<f64>>> {
    values.iter().map(|s| parse_complex(s)).collect()
}

pub fn parse_exponents(values: &[String]) -> Result<Vec<Exponent<f64>>> {
    values.iter().map(|s| s.parse()).collect()
}

/// `"p,q"` into a pair of exponents.
pub fn parse_pair(s: &str) -> Result<(Exponent<f64>, Exponent<f64>)> {
    let (p, q) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("bad exponent pair '{s}', expected p,q")))?;
    Ok((p.parse()?, q.parse()?))
}

impl EstimateSection {
    pub fn sweep(&self, seed: u64) -> Result<EstimateSweep> {
        Ok(EstimateSweep {
            dims: self.dims.clone(),
            orders: self.orders.clone(),
            pairs: self.pairs.iter().map(|s| parse_pair(s)).collect::<Result<_>>()?,
            omegas: parse_omegas(&self.omegas)?,
            testfns: self.testfns.clone(),
            random_mixtures: self.random_mixtures,
            seed,
        })
    }
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: SuiteConfig =
            toml::from_str(text).map_err(|e| Error::Parse(format!("config: {}", e.message())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn runs(&self, harness: &str) -> bool {
        self.harnesses.iter().any(|h| h == harness)
    }

    /// Checks every value a harness would reject, before anything runs.
    pub fn validate(&self) -> Result<()> {
        for h in &self.harnesses {
            if !HARNESSES.contains(&h.as_str()) {
                return Err(Error::Parse(format!("unknown harness '{h}'")));
            }
        }
        let id = &self.identity;
        for t in id.testfns.iter().chain(&self.estimate.testfns) {
            catalog::lookup(t)?;
        }
        parse_omegas(&id.omegas)?;
        for &n in &id.dims {
            if n == 0 || n > id.points.len() {
                return Err(Error::InvalidParameter(format!(
                    "identity: no grid size configured for n = {n}"
                )));
            }
        }
        let sweep = self.estimate.sweep(self.seed)?;
        for &(p, q) in &sweep.pairs {
            crate::estimates::ExponentTriple::new(p, q)?;
        }
        parse_exponents(&self.estimate.chain_rs)?;
        for &t in &self.estimate.chain_thetas {
            check_theta(t)?;
        }
        parse_exponents(&self.constants.rs)?;
        for &t in &self.constants.thetas {
            check_theta(t)?;
        }
        self.cgl.config()?;
        self.cgl.q.parse::<Exponent<f64>>()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_config_parses() {
        let cfg = SuiteConfig::parse(DEFAULT_CONFIG).unwrap();
        assert!(cfg.runs("identity"));
    }

    #[test]
    fn unknown_keys_and_ranges_are_rejected() {
        assert!(SuiteConfig::parse("bogus = 1").is_err());
        assert!(SuiteConfig::parse("harnesses = [\"nope\"]").is_err());
        let bad = "harnesses = [\"constants\"]\n[constants]\nthetas = [1.58]\n";
        assert!(matches!(SuiteConfig::parse(bad), Err(Error::InvalidParameter(_))));
        assert!(SuiteConfig::parse("").unwrap().harnesses.is_empty());
    }
}
