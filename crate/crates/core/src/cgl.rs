//! Complex Ginzburg-Landau flow `∂_t u − νΔu = λ|u|^{p−1}u` via its integral
//! equation, with probes for the decay and weighted-growth bounds.
//!
//! One step of size `τ` is the midpoint exponential integrator
//!
//! ```text
//! u_½   = e^{(τ/2)νΔ}(u_k + (τ/2) f(u_k))
//! u_k+1 = e^{τνΔ} u_k + τ e^{(τ/2)νΔ} f(u_½)
//! ```
//!
//! evaluated in Fourier space with precomputed heat symbols.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimates::LipschitzWeight;
use crate::multiindex::enumerate_level;
use crate::scalar::{Exponent, Real};
use crate::semigroup::{lp_norm, weight_multiply, GridFunction, GridShape, HeatPropagator, Weight};

/// Parameters of a run. The initial datum is passed separately.
#[derive(Clone, Debug, PartialEq)]
pub struct CglConfig<T> {
    pub nu: Complex<T>,
    pub lambda: Complex<T>,
    pub p: T,
    pub dt: T,
    pub t_end: T,
    /// Spacing of stored snapshots; a multiple of `dt`.
    pub sample_every: T,
    /// Upper bound on `‖u₀‖₁ + ‖u₀‖_∞`.
    pub smallness: T,
}

impl<T: Real> Default for CglConfig<T> {
    fn default() -> Self {
        Self {
            nu: Complex::new(T::one(), T::zero()),
            lambda: Complex::new(-T::one(), T::zero()),
            p: T::lit(4.0),
            dt: T::lit(0.01),
            t_end: T::lit(100.0),
            sample_every: T::lit(0.25),
            smallness: T::lit(0.05),
        }
    }
}

impl<T: Real> CglConfig<T> {
    pub fn validate(&self, u0: &GridFunction<T>) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.nu.re > T::zero()) {
            return bad(format!("need re ν > 0, got {}", self.nu));
        }
        let fujita = T::one() + T::lit(2.0) / T::from_count(u0.dim());
        if !(self.p > fujita) {
            return bad(format!("need p > 1 + 2/n = {fujita}, got {}", self.p));
        }
        if !(self.dt > T::zero()) || !(self.t_end >= T::zero()) {
            return bad("need dt > 0 and T ≥ 0".into());
        }
        if !(self.sample_every >= self.dt) {
            return bad("sampling interval must be at least dt".into());
        }
        let size = lp_norm(u0, Exponent::one()) + lp_norm(u0, Exponent::Infinity);
        if size > self.smallness {
            return bad(format!(
                "initial datum too large: ‖u₀‖₁ + ‖u₀‖∞ = {size} exceeds {}",
                self.smallness
            ));
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.t_end / self.dt).round().to_usize().unwrap_or(0)
    }

    fn sample_stride(&self) -> usize {
        (self.sample_every / self.dt).round().to_usize().unwrap_or(1).max(1)
    }
}

/// `f(u) = λ|u|^{p−1}u`, with `f(0) = 0`.
pub fn nonlinearity<T: Real>(lambda: Complex<T>, p: T, u: Complex<T>) -> Complex<T> {
    let a = u.norm();
    if a.is_zero() {
        return Complex::new(T::zero(), T::zero());
    }
    lambda * u * a.powf(p - T::one())
}

/// Precomputed propagators for one configuration and grid.
pub struct CglSolver<T: Real> {
    cfg: CglConfig<T>,
    full: HeatPropagator<T>,
    half: HeatPropagator<T>,
    limit: T,
}

impl<T: Real> CglSolver<T> {
    pub fn new(cfg: CglConfig<T>, u0: &GridFunction<T>) -> Result<Self> {
        cfg.validate(u0)?;
        Self::build(cfg, u0)
    }

    fn build(cfg: CglConfig<T>, u0: &GridFunction<T>) -> Result<Self> {
        let shape = *u0.shape();
        let full = HeatPropagator::new(shape, cfg.nu * cfg.dt)?;
        let half = HeatPropagator::new(shape, cfg.nu * (cfg.dt * T::lit(0.5)))?;
        let limit = T::lit(10.0) * u0.max_abs();
        Ok(Self {
            cfg,
            full,
            half,
            limit,
        })
    }

    pub fn config(&self) -> &CglConfig<T> {
        &self.cfg
    }

    fn apply_f(&self, u: &[Complex<T>]) -> Vec<Complex<T>> {
        let (lambda, p) = (self.cfg.lambda, self.cfg.p);
        u.par_iter().map(|&v| nonlinearity(lambda, p, v)).collect()
    }

    fn advance(&self, u: &GridFunction<T>) -> Result<GridFunction<T>> {
        if self.cfg.lambda.is_zero() {
            return self.full.apply(u);
        }
        let engine = self.full.engine();
        let tau = self.cfg.dt;
        let half_tau = tau * T::lit(0.5);

        let mut u_hat = u.samples().to_vec();
        engine.forward(&mut u_hat);
        let mut f_hat = self.apply_f(u.samples());
        engine.forward(&mut f_hat);

        let mut mid: Vec<Complex<T>> = u_hat
            .par_iter()
            .zip(&f_hat)
            .map(|(&a, &b)| a + b * half_tau)
            .collect();
        self.half.apply_to_coeffs(&mut mid);
        engine.inverse(&mut mid);

        let mut f_mid = self.apply_f(&mid);
        engine.forward(&mut f_mid);
        self.half.apply_to_coeffs(&mut f_mid);
        self.full.apply_to_coeffs(&mut u_hat);
        let mut next: Vec<Complex<T>> = u_hat
            .par_iter()
            .zip(&f_mid)
            .map(|(&a, &b)| a + b * tau)
            .collect();
        engine.inverse(&mut next);
        GridFunction::new(*u.shape(), next)
    }

    /// One step with the blow-up guard; `step` is only used in the error.
    pub fn step(&self, u: &GridFunction<T>, step: usize) -> Result<GridFunction<T>> {
        let limit = self.limit.to_f64_lossy();
        let next = self.advance(u).map_err(|_| Error::BlowUp {
            step,
            sup: f64::INFINITY,
            limit,
        })?;
        let sup = next.max_abs();
        if sup > self.limit {
            return Err(Error::BlowUp {
                step,
                sup: sup.to_f64_lossy(),
                limit: self.limit.to_f64_lossy(),
            });
        }
        Ok(next)
    }

    /// Runs to `t_end`, storing snapshots every `sample_every`.
    pub fn simulate(&self, u0: &GridFunction<T>) -> Result<Trajectory<T>> {
        let steps = self.cfg.steps();
        let stride = self.cfg.sample_stride();
        let mut traj = Trajectory {
            times: vec![T::zero()],
            snapshots: vec![u0.clone()],
            l1_history: vec![lp_norm(u0, Exponent::one())],
            max_boundary_mass: u0.boundary_mass_fraction(),
        };
        let mut u = u0.clone();
        for k in 1..=steps {
            u = self.step(&u, k)?;
            traj.l1_history.push(lp_norm(&u, Exponent::one()));
            if k % stride == 0 || k == steps {
                traj.max_boundary_mass = traj.max_boundary_mass.max(u.boundary_mass_fraction());
                traj.times.push(T::from_count(k) * self.cfg.dt);
                traj.snapshots.push(u.clone());
            }
        }
        Ok(traj)
    }
}

/// One step of the integrator from `u` (which also sets the blow-up reference).
pub fn step_duhamel<T: Real>(u: &GridFunction<T>, cfg: &CglConfig<T>) -> Result<GridFunction<T>> {
    if !(cfg.nu.re > T::zero()) {
        return Err(Error::InvalidParameter(format!("need re ν > 0, got {}", cfg.nu)));
    }
    CglSolver::build(cfg.clone(), u)?.step(u, 1)
}

/// Stored snapshots of a run.
#[derive(Clone, Debug)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub snapshots: Vec<GridFunction<T>>,
    /// `‖u(t_k)‖₁` after every step, starting at `t = 0`.
    pub l1_history: Vec<T>,
    /// Largest fraction of L¹ mass within `L/2` of the boundary over the snapshots.
    pub max_boundary_mass: T,
}

impl<T: Real> Trajectory<T> {
    pub fn final_state(&self) -> &GridFunction<T> {
        self.snapshots.last().expect("trajectory holds u₀")
    }

    fn index_at(&self, t: T) -> Option<usize> {
        let tol = T::lit(1e-9) * (T::one() + t.abs());
        self.times.iter().position(|&s| (s - t).abs() <= tol)
    }
}

/// `(1+t)^{(n/2)(1−1/r)}‖u(t)‖_r` at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayRecord {
    pub t: f64,
    pub r: Exponent<f64>,
    pub value: f64,
}

#[derive(Clone, Debug)]
pub struct DecayProbe {
    pub records: Vec<DecayRecord>,
    pub pass: bool,
}

fn exp64<T: Real>(e: Exponent<T>) -> Exponent<f64> {
    match e {
        Exponent::Finite(p) => Exponent::Finite(p.to_f64_lossy()),
        Exponent::Infinity => Exponent::Infinity,
    }
}

/// Decay records for every `r`, ordered by `r` then `t`. Passes when each
/// series stays below twice its value at `t = 1` on `[1, T]`.
pub fn decay_probe<T: Real>(traj: &Trajectory<T>, rs: &[Exponent<T>]) -> DecayProbe {
    let n = T::from_count(traj.final_state().dim());
    let mut records = Vec::new();
    let mut pass = true;
    let anchor = traj.index_at(T::one());
    for &r in rs {
        let power = n * T::lit(0.5) * (T::one() - r.reciprocal());
        let values: Vec<T> = traj
            .snapshots
            .par_iter()
            .zip(&traj.times)
            .map(|(u, &t)| (T::one() + t).powf(power) * lp_norm(u, r))
            .collect();
        if let Some(i1) = anchor {
            let bound = T::lit(2.0) * values[i1];
            pass &= traj
                .times
                .iter()
                .zip(&values)
                .filter(|(&t, _)| t >= T::one())
                .all(|(_, &v)| v <= bound);
        }
        records.extend(traj.times.iter().zip(&values).map(|(&t, &v)| DecayRecord {
            t: t.to_f64_lossy(),
            r: exp64(r),
            value: v.to_f64_lossy(),
        }));
    }
    DecayProbe { records, pass }
}

/// Simulates and probes in one call.
pub fn run_decay_probe<T: Real>(
    cfg: &CglConfig<T>,
    u0: &GridFunction<T>,
    rs: &[Exponent<T>],
) -> Result<DecayProbe> {
    let traj = CglSolver::new(cfg.clone(), u0)?.simulate(u0)?;
    Ok(decay_probe(&traj, rs))
}

/// `W(t) = Σ_{|α|=m}‖x^αu(t)‖_q` and `W/(1+t^{m/2})`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedRecord {
    pub t: f64,
    pub w: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug)]
pub struct WeightedProbe {
    pub m: u32,
    pub records: Vec<WeightedRecord>,
    /// Least-squares slope of `log W` against `log t` over `[T/4, T]`.
    pub slope: f64,
    /// Largest `ratio(t)/ratio(1)`.
    pub ratio_growth: f64,
    pub pass: bool,
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = pts.len() as f64;
    if k < 2.0 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn weighted_probe<T: Real>(traj: &Trajectory<T>, m: u32, q: Exponent<T>) -> Result<WeightedProbe> {
    if m == 0 {
        return Err(Error::InvalidParameter("weighted probe needs m ≥ 1".into()));
    }
    if q.is_infinite() && m != 1 {
        return Err(Error::InvalidParameter(
            "weighted sup-norms are probed only for m = 1".into(),
        ));
    }
    let dim = traj.final_state().dim();
    let level = enumerate_level(dim, m);
    let half_m = T::from_count(m as usize) * T::lit(0.5);
    let ws: Vec<T> = traj
        .snapshots
        .par_iter()
        .map(|u| {
            level.iter().try_fold(T::zero(), |acc, alpha| {
                Ok(acc + lp_norm(&weight_multiply(u, &Weight::Monomial(alpha.clone()))?, q))
            })
        })
        .collect::<Result<_>>()?;
    let records: Vec<WeightedRecord> = traj
        .times
        .iter()
        .zip(&ws)
        .map(|(&t, &w)| WeightedRecord {
            t: t.to_f64_lossy(),
            w: w.to_f64_lossy(),
            ratio: (w / (T::one() + t.powf(half_m))).to_f64_lossy(),
        })
        .collect();
    let t_end = traj.times.last().copied().unwrap_or(T::zero()).to_f64_lossy();
    let window: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.t >= t_end / 4.0 && r.t > 0.0)
        .map(|r| (r.t, r.w))
        .collect();
    let slope = log_log_slope(&window);
    let ratio_growth = match traj.index_at(T::one()) {
        Some(i1) => records
            .iter()
            .map(|r| r.ratio / records[i1].ratio)
            .fold(0.0, f64::max),
        None => f64::NAN,
    };
    let slope_ok = slope.is_nan() || slope <= 0.5 * m as f64 + 0.1;
    let ratio_ok = ratio_growth.is_nan() || ratio_growth <= 3.0;
    Ok(WeightedProbe {
        m,
        records,
        slope,
        ratio_growth,
        pass: slope_ok && ratio_ok,
    })
}

/// Simulates and probes in one call.
pub fn run_weighted_probe<T: Real>(
    cfg: &CglConfig<T>,
    u0: &GridFunction<T>,
    m: u32,
    q: Exponent<T>,
) -> Result<WeightedProbe> {
    let traj = CglSolver::new(cfg.clone(), u0)?.simulate(u0)?;
    weighted_probe(&traj, m, q)
}

/// Whether `‖u(t)‖₁` never increases by more than `rel_tol` between steps.
pub fn mass_is_monotone<T: Real>(traj: &Trajectory<T>, rel_tol: T) -> bool {
    traj.l1_history
        .windows(2)
        .all(|w| w[1] <= w[0] * (T::one() + rel_tol))
}

/// `η_{j,ε}(x) = x_j e^{−ε|x|²}`, with `‖∇η_{j,ε}‖_∞ ≤ 2`.
pub fn mollified_weight<T: Real>(shape: GridShape<T>, axis: usize, eps: T) -> Result<LipschitzWeight<T>> {
    if axis >= shape.dim() {
        return Err(Error::InvalidParameter(format!(
            "axis {axis} out of range for dimension {}",
            shape.dim()
        )));
    }
    if !(eps > T::zero()) {
        return Err(Error::InvalidParameter(format!("need ε > 0, got {eps}")));
    }
    let samples = GridFunction::from_fn(shape, |x| {
        let r2: T = x.iter().map(|&v| v * v).sum();
        Complex::new(x[axis] * (-eps * r2).exp(), T::zero())
    });
    Ok(LipschitzWeight {
        name: format!("eta{}_{}", axis + 1, eps),
        samples,
        gradient_bound: T::lit(2.0),
    })
}

/// Analytic `∇η_{j,ε}(x)`.
pub fn mollified_weight_gradient<T: Real>(x: &[T], axis: usize, eps: T) -> Vec<T> {
    let r2: T = x.iter().map(|&v| v * v).sum();
    let g = (-eps * r2).exp();
    x.iter()
        .enumerate()
        .map(|(k, &xk)| {
            let kron = if k == axis { T::one() } else { T::zero() };
            g * (kron - T::lit(2.0) * eps * x[axis] * xk)
        })
        .collect()
}
