//! Runs the harnesses a config selects and writes one CSV per harness.

use std::path::{Path, PathBuf};

use crate::cgl::DecayProbe;
use crate::error::Result;
use crate::harness::{self, CglOutcome};
use crate::scalar::Exponent;
use crate::semigroup::GridShape;

use super::config::{parse_exponents, parse_omegas, SuiteConfig};
use super::output::{estimate_table, fmt_real, identity_row, write_atomic, Stamp, Table, IDENTITY_HEADER};

/// Row and failure counts of one harness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarnessSummary {
    pub name: String,
    pub rows: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOutcome {
    pub summaries: Vec<HarnessSummary>,
    pub artifacts: Vec<PathBuf>,
}

impl SuiteOutcome {
    pub fn pass(&self) -> bool {
        self.summaries.iter().all(|s| s.failures == 0)
    }

    fn record(&mut self, name: &str, table: &Table, dir: &Path, stamp: &Stamp) -> Result<()> {
        let path = dir.join(format!("{}.csv", name.replace('-', "_")));
        table.write(&path, stamp)?;
        self.artifacts.push(path);
        self.summaries.push(HarnessSummary {
            name: name.into(),
            rows: table.len(),
            failures: table.failures(),
        });
        Ok(())
    }
}

pub fn run_suite(cfg: &SuiteConfig, stamp: &Stamp, out_dir: &Path) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    if cfg.harnesses.is_empty() {
        return Ok(out);
    }
    std::fs::create_dir_all(out_dir)?;
    let id = &cfg.identity;
    let shape_for = |n: usize| GridShape::new(n, id.points[n - 1], id.half_width);
    let omegas = parse_omegas(&id.omegas)?;

    if cfg.runs("identity") {
        let cases = harness::identity_cases(&id.dims, id.max_order, &omegas, &id.testfns);
        let mut t = Table::new(&IDENTITY_HEADER);
        for (case, r) in harness::run_identity_sweep(&cases, shape_for)? {
            t.push(identity_row(&r, &case.testfn), r.pass);
        }
        out.record("identity", &t, out_dir, stamp)?;
    }
    if cfg.runs("shift") {
        let mut t = Table::new(&IDENTITY_HEADER);
        for (case, r) in
            harness::run_shift_sweep(&id.dims, id.shift_max_order, &omegas, &id.testfns, shape_for)?
        {
            t.push(identity_row(&r, &case.testfn), r.pass);
        }
        out.record("shift", &t, out_dir, stamp)?;
    }

    let est = &cfg.estimate;
    let sweep = est.sweep(cfg.seed)?;
    if cfg.runs("estimate") {
        out.record("estimate", &estimate_table(&sweep.run()?), out_dir, stamp)?;
    }
    if cfg.runs("radial") {
        out.record("radial", &estimate_table(&sweep.run_radial()?), out_dir, stamp)?;
    }
    if cfg.runs("lipschitz") {
        let reports = harness::run_lipschitz_sweep(&sweep)?;
        out.record("lipschitz", &estimate_table(&reports), out_dir, stamp)?;
    }
    if cfg.runs("kernel-chain") {
        let rs = parse_exponents(&est.chain_rs)?;
        let reports = harness::run_kernel_chain(&est.dims, est.chain_max_order, &est.chain_thetas, &rs)?;
        out.record("kernel-chain", &estimate_table(&reports), out_dir, stamp)?;
    }
    if cfg.runs("holder") {
        let reports = harness::run_holder(&sweep, est.holder_max_m)?;
        out.record("holder", &estimate_table(&reports), out_dir, stamp)?;
    }
    if cfg.runs("constants") {
        let c = &cfg.constants;
        let rows = harness::constants_table(&c.dims, &c.orders, &parse_exponents(&c.rs)?, &c.thetas)?;
        out.record("constants", &constants_table(&rows), out_dir, stamp)?;
    }
    if cfg.runs("cgl") {
        let c = &cfg.cgl;
        let shape = GridShape::new(1, c.points, c.half_width)?;
        let q: Exponent<f64> = c.q.parse()?;
        let outcome = harness::run_cgl(&c.config()?, shape, c.eps, c.sigma, &c.orders, q)?;
        let written = write_cgl_artifacts(&outcome, &out_dir.join("cgl"), stamp)?;
        let summary = cgl_summary(&outcome);
        out.summaries.push(HarnessSummary {
            name: "cgl".into(),
            rows: summary.len(),
            failures: summary.failures(),
        });
        out.artifacts.extend(written);
    }
    Ok(out)
}

pub const CONSTANTS_HEADER: [&str; 6] = ["n", "m", "r", "theta", "A", "A_tilde"];

pub fn constants_table(rows: &[harness::ConstantRow]) -> Table {
    let mut t = Table::new(&CONSTANTS_HEADER);
    for r in rows {
        t.push(
            vec![
                r.n.to_string(),
                r.m.to_string(),
                r.r.to_string(),
                fmt_real(r.theta),
                fmt_real(r.a),
                fmt_real(r.a_tilde),
            ],
            true,
        );
    }
    t
}

/// Largest `record(t)/record(1)` over `t ≥ 1`, per exponent in record order.
pub fn decay_growth(probe: &DecayProbe) -> Vec<(Exponent<f64>, f64)> {
    let mut out: Vec<(Exponent<f64>, f64)> = Vec::new();
    let mut rs: Vec<Exponent<f64>> = Vec::new();
    for rec in &probe.records {
        if !rs.contains(&rec.r) {
            rs.push(rec.r);
        }
    }
    for r in rs {
        let series: Vec<_> = probe.records.iter().filter(|x| x.r == r).collect();
        let anchor = series.iter().find(|x| x.t >= 1.0).map(|x| x.value);
        let growth = match anchor {
            Some(a) if a > 0.0 => series
                .iter()
                .filter(|x| x.t >= 1.0)
                .map(|x| x.value / a)
                .fold(0.0, f64::max),
            _ => f64::NAN,
        };
        out.push((r, growth));
    }
    out
}

/// Pass/fail rows for every CGL criterion.
pub fn cgl_summary(o: &CglOutcome) -> Table {
    let mut t = Table::new(&["probe", "value", "limit", "pass"]);
    let mut row = |name: String, value: f64, limit: f64, pass: bool| {
        t.push(vec![name, fmt_real(value), fmt_real(limit), pass.to_string()], pass);
    };
    for (r, g) in decay_growth(&o.decay) {
        row(format!("decay_growth_r{r}"), g, 2.0, !(g > 2.0));
    }
    for w in &o.weighted {
        let limit = 0.5 * w.m as f64 + 0.1;
        row(format!("slope_m{}", w.m), w.slope, limit, !(w.slope > limit));
        row(format!("ratio_growth_m{}", w.m), w.ratio_growth, 3.0, !(w.ratio_growth > 3.0));
    }
    let bm = o.trajectory.max_boundary_mass;
    row("boundary_mass".into(), bm, 1e-10, bm < 1e-10);
    t
}

/// Writes `PREFIX_decay.csv`, `PREFIX_weighted.csv`, `PREFIX_summary.csv` and `PREFIX.plt`.
pub fn write_cgl_artifacts(o: &CglOutcome, prefix: &Path, stamp: &Stamp) -> Result<Vec<PathBuf>> {
    let with_suffix = |s: &str| {
        let mut name = prefix.file_name().unwrap_or_default().to_os_string();
        name.push(s);
        prefix.with_file_name(name)
    };
    let mut decay = Table::new(&["t", "r", "record"]);
    for rec in &o.decay.records {
        decay.push(vec![fmt_real(rec.t), rec.r.to_string(), fmt_real(rec.value)], true);
    }
    let mut weighted = Table::new(&["t", "W", "ratio", "m"]);
    for w in &o.weighted {
        for rec in &w.records {
            weighted.push(
                vec![fmt_real(rec.t), fmt_real(rec.w), fmt_real(rec.ratio), w.m.to_string()],
                true,
            );
        }
    }
    let paths = [
        with_suffix("_decay.csv"),
        with_suffix("_weighted.csv"),
        with_suffix("_summary.csv"),
        with_suffix(".plt"),
    ];
    decay.write(&paths[0], stamp)?;
    weighted.write(&paths[1], stamp)?;
    cgl_summary(o).write(&paths[2], stamp)?;
    let base = |p: &Path| p.file_name().unwrap_or_default().to_string_lossy().into_owned();
    let ms: Vec<String> = o.weighted.iter().map(|w| w.m.to_string()).collect();
    let rs: Vec<String> = decay_growth(&o.decay).iter().map(|(r, _)| r.to_string()).collect();
    let script = format!(
        "{footer}
set datafile separator ','
set xlabel 't'
set logscale xy
set ylabel 'sum of weighted norms'
plot for [m in \"{ms}\"] '{weighted}' using 1:(strcol(4) eq m ? $2 : 1/0) with lines title 'm='.m
pause -1
unset logscale y
set ylabel 'decay record'
plot for [r in \"{rs}\"] '{decay}' using 1:(strcol(2) eq r ? $3 : 1/0) with lines title 'r='.r
pause -1
",
        footer = stamp.footer(),
        ms = ms.join(" "),
        rs = rs.join(" "),
        weighted = base(&paths[1]),
        decay = base(&paths[0]),
    );
    write_atomic(&paths[3], script.as_bytes())?;
    Ok(paths.to_vec())
}
