//! Zeros of `F(x) = (c_{1,m_1}(x), ..., c_{d,m_d}(x))` on the unit sphere of `C^{d+1}`.
//!
//! `|F|` is invariant under `x -> e^{i phi} x`, so the search runs in affine charts of
//! `CP^d`: the largest coordinate of `a` is pinned to 1 and the remaining `d` complex
//! coordinates (`a_i / a_k` and `b / a_k`) are free. Each start does a Nelder-Mead descent
//! on `|F|` followed by Levenberg-Marquardt on the `2d` real components of `F` with a
//! central-difference Jacobian.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{self, DeviationReport, DEFAULT_GRID};
use crate::measure::{check_q, Configuration, MassSpec};
use crate::random;

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_STARTS: usize = 32;
/// Multistart points with `|a|` below this are redrawn.
pub const START_MIN_NORM_A: f64 = 0.1;
/// Converged solutions closer than this in `CP^d` count as the same witness.
pub const WITNESS_SEPARATION: f64 = 1e-4;

const NM_HANDOFF: f64 = 1e-3;
const NM_MAX_ITER: usize = 400;
const NM_STEP: f64 = 0.3;
const LM_MAX_ITER: usize = 60;
const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct SolveProblem {
    masses: Vec<MassSpec>,
    exponents: Vec<u32>,
    q: u32,
    grid: usize,
    tol: f64,
    starts: usize,
    seed: u64,
}

impl SolveProblem {
    /// `d` masses on `C^d` with one positive exponent each.
    pub fn new(masses: Vec<MassSpec>, exponents: Vec<u32>, q: u32) -> Result<Self> {
        let p = Self {
            masses,
            exponents,
            q,
            grid: DEFAULT_GRID,
            tol: DEFAULT_TOL,
            starts: DEFAULT_STARTS,
            seed: 0,
        };
        p.validate()?;
        Ok(p)
    }

    /// `d` masses on `C^{dn}`, each asked to annihilate its coefficients `1..=n`.
    pub fn stacked(masses: Vec<MassSpec>, n: u32, q: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        let mut all = Vec::with_capacity(masses.len() * n as usize);
        let mut exponents = Vec::with_capacity(all.capacity());
        for m in masses {
            for k in 1..=n {
                all.push(m.clone());
                exponents.push(k);
            }
        }
        Self::new(all, exponents, q)
    }

    pub fn with_grid(mut self, grid: usize) -> Result<Self> {
        self.grid = grid;
        self.validate()?;
        Ok(self)
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        self.tol = tol;
        self.validate()?;
        Ok(self)
    }

    pub fn with_starts(mut self, starts: usize) -> Result<Self> {
        self.starts = starts;
        self.validate()?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        check_q(self.q)?;
        let d = self.masses.len();
        if d == 0 {
            return Err(Error::InvalidArgument(
                "at least one mass is required".into(),
            ));
        }
        if self.exponents.len() != d {
            return Err(Error::InvalidArgument(format!(
                "{} masses but {} exponents",
                d,
                self.exponents.len()
            )));
        }
        if let Some((j, m)) = self.masses.iter().enumerate().find(|(_, m)| m.dim() != d) {
            return Err(Error::InvalidArgument(format!(
                "mass {j} lives on C^{} but {d} masses need C^{d}",
                m.dim()
            )));
        }
        if self.grid < 8 || !self.grid.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "grid size must be a power of two >= 8, found {}",
                self.grid
            )));
        }
        for (j, &m) in self.exponents.iter().enumerate() {
            if m == 0 {
                return Err(Error::InvalidArgument(format!(
                    "exponent {j} is 0; exponents must be positive"
                )));
            }
            if m as usize * 8 >= self.grid {
                return Err(Error::InvalidArgument(format!(
                    "exponent {m} needs a grid larger than {}",
                    8 * m as usize
                )));
            }
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, found {}",
                self.tol
            )));
        }
        if self.starts == 0 {
            return Err(Error::InvalidArgument(
                "at least one start is required".into(),
            ));
        }
        Ok(())
    }

    pub fn masses(&self) -> &[MassSpec] {
        &self.masses
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn starts(&self) -> usize {
        self.starts
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.masses.len()
    }

    /// Absolute residual threshold `tol * max_j total_j`.
    pub fn threshold(&self) -> f64 {
        self.tol * self.scale()
    }

    fn scale(&self) -> f64 {
        self.masses
            .iter()
            .map(MassSpec::total_mass)
            .fold(0.0, f64::max)
    }

    /// Index of the first mass equal to mass `j`.
    fn representative(&self, j: usize) -> usize {
        (0..j)
            .find(|&i| self.masses[i] == self.masses[j])
            .unwrap_or(j)
    }

    /// Largest `n` such that every exponent `1..=n` is assigned to a copy of mass `j`.
    fn annihilated(&self, j: usize) -> usize {
        let rep = self.representative(j);
        let mut held: Vec<u32> = (0..self.dim())
            .filter(|&i| self.representative(i) == rep)
            .map(|i| self.exponents[i])
            .collect();
        held.sort_unstable();
        held.dedup();
        held.iter()
            .enumerate()
            .take_while(|(i, &m)| m as usize == i + 1)
            .count()
    }
}

/// `c_{j, m_j}(x)` for every mass, one profile per distinct mass.
pub fn coefficients(p: &SolveProblem, x: &Configuration) -> Result<Vec<Complex64>> {
    let mut profiles: Vec<Option<fourier::FourierProfile>> = vec![None; p.dim()];
    let mut out = Vec::with_capacity(p.dim());
    for j in 0..p.dim() {
        let rep = p.representative(j);
        if profiles[rep].is_none() {
            profiles[rep] = Some(fourier::profile(&p.masses[rep], x, p.q, p.grid)?);
        }
        let prof = profiles[rep].as_ref().expect("filled above");
        out.push(prof.coefficient(p.exponents[j] as i64)?);
    }
    Ok(out)
}

/// `sqrt(sum_j |c_{j, m_j}(x)|^2)`.
pub fn residual(p: &SolveProblem, x: &Configuration) -> Result<f64> {
    Ok(coefficients(p, x)?
        .iter()
        .map(Complex64::norm_sqr)
        .sum::<f64>()
        .sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperplaneDesc {
    pub a: Vec<Complex64>,
    pub b: Complex64,
    /// For `d = 1`, the point `u` with `u conj(a) + conj(b) = 0`.
    pub apex: Option<Complex64>,
}

pub fn hyperplane_of(x: &Configuration) -> Result<HyperplaneDesc> {
    if x.is_degenerate() {
        return Err(Error::DegenerateConfiguration { norm_a: x.norm_a() });
    }
    let apex = (x.dim() == 1).then(|| -x.b().conj() / x.a()[0].conj());
    Ok(HyperplaneDesc {
        a: x.a().to_vec(),
        b: x.b(),
        apex,
    })
}

/// Outcome of one local search.
#[derive(Debug, Clone, Serialize)]
pub struct StartTrace {
    pub start: usize,
    pub initial: Configuration,
    pub x: Configuration,
    pub residual: f64,
    pub converged: bool,
    pub simplex_iterations: usize,
    pub newton_iterations: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientValue {
    pub mass: usize,
    pub m: u32,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub x: Configuration,
    pub residual: f64,
    pub hyperplane: HyperplaneDesc,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub x: Configuration,
    pub residual: f64,
    pub converged: bool,
    pub threshold: f64,
    pub hyperplane: HyperplaneDesc,
    pub coefficients: Vec<CoefficientValue>,
    pub per_mass: Vec<DeviationReport>,
    /// Distinct converged solutions, best first.
    pub witnesses: Vec<Witness>,
    pub trace: Vec<StartTrace>,
}

/// Multistart search. A result that misses the threshold is returned with
/// `converged == false` together with the full trace.
pub fn solve(p: &SolveProblem) -> Result<SolveResult> {
    p.validate()?;
    let traces: Vec<StartTrace> = (0..p.starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            rng.set_stream(i as u64);
            let x0 = random::configuration(&mut rng, p.dim(), START_MIN_NORM_A);
            local_search(p, i, x0)
        })
        .collect::<Result<_>>()?;

    let mut order: Vec<usize> = (0..traces.len()).collect();
    order.sort_by(|&i, &j| compare(&traces[i], &traces[j]));
    let best = &traces[order[0]];

    let mut witnesses: Vec<Witness> = Vec::new();
    for &i in &order {
        let t = &traces[i];
        if !t.converged {
            break;
        }
        if witnesses
            .iter()
            .all(|w| w.x.projective_distance(&t.x) > WITNESS_SEPARATION)
        {
            witnesses.push(Witness {
                x: t.x.clone(),
                residual: t.residual,
                hyperplane: hyperplane_of(&t.x)?,
            });
        }
    }

    let x = best.x.clone();
    let coefficients = coefficients(p, &x)?
        .into_iter()
        .enumerate()
        .map(|(j, c)| CoefficientValue {
            mass: j,
            m: p.exponents[j],
            re: c.re,
            im: c.im,
            abs: c.norm(),
        })
        .collect();
    let per_mass = (0..p.dim())
        .map(|j| {
            let prof = fourier::profile(&p.masses[j], &x, p.q, p.grid)?;
            fourier::deviation_report(&prof, p.annihilated(j))
        })
        .collect::<Result<_>>()?;
    Ok(SolveResult {
        residual: best.residual,
        converged: best.converged,
        threshold: p.threshold(),
        hyperplane: hyperplane_of(&x)?,
        x,
        coefficients,
        per_mass,
        witnesses,
        trace: traces,
    })
}

/// One local search from `x0`.
pub fn solve_from(p: &SolveProblem, x0: &Configuration) -> Result<StartTrace> {
    p.validate()?;
    if x0.dim() != p.dim() {
        return Err(Error::InvalidArgument(format!(
            "start has dim {} but the problem has dim {}",
            x0.dim(),
            p.dim()
        )));
    }
    if x0.is_degenerate() {
        return Err(Error::DegenerateConfiguration {
            norm_a: x0.norm_a(),
        });
    }
    local_search(p, 0, x0.clone())
}

fn compare(s: &StartTrace, t: &StartTrace) -> std::cmp::Ordering {
    s.residual.total_cmp(&t.residual).then_with(|| {
        s.x.to_reals()
            .iter()
            .zip(t.x.to_reals())
            .map(|(u, v)| u.total_cmp(&v))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    })
}

/// Affine chart of `CP^d` pinning `a_pivot = 1`.
#[derive(Debug, Clone, Copy)]
struct Chart {
    pivot: usize,
    dim: usize,
}

impl Chart {
    fn around(x: &Configuration) -> Self {
        let pivot = x
            .a()
            .iter()
            .enumerate()
            .fold((0, -1.0), |(k, best), (i, z)| {
                if z.norm() > best {
                    (i, z.norm())
                } else {
                    (k, best)
                }
            })
            .0;
        Self {
            pivot,
            dim: x.dim(),
        }
    }

    fn coords(&self, x: &Configuration) -> Vec<f64> {
        let inv = 1.0 / x.a()[self.pivot];
        x.a()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != self.pivot)
            .map(|(_, z)| z * inv)
            .chain(std::iter::once(x.b() * inv))
            .flat_map(|z| [z.re, z.im])
            .collect()
    }

    fn point(&self, y: &[f64]) -> Result<Configuration> {
        let mut free = y.chunks(2).map(|c| Complex64::new(c[0], c[1]));
        let a = (0..self.dim)
            .map(|i| {
                if i == self.pivot {
                    Complex64::new(1.0, 0.0)
                } else {
                    free.next().expect("2d chart coordinates")
                }
            })
            .collect();
        let b = free.next().expect("2d chart coordinates");
        Configuration::new(a, b)
    }

    /// A free `a` coordinate has outgrown the pivot.
    fn stale(&self, y: &[f64]) -> bool {
        (0..self.dim - 1).any(|i| y[2 * i].hypot(y[2 * i + 1]) > 2.0)
    }
}

struct Objective<'a> {
    p: &'a SolveProblem,
    scale: f64,
    evaluations: usize,
}

impl Objective<'_> {
    fn components(&mut self, chart: &Chart, y: &[f64]) -> Result<Vec<f64>> {
        self.evaluations += 1;
        let x = chart.point(y)?;
        Ok(coefficients(self.p, &x)?
            .into_iter()
            .flat_map(|c| [c.re / self.scale, c.im / self.scale])
            .collect())
    }

    fn norm(&mut self, chart: &Chart, y: &[f64]) -> f64 {
        match self.components(chart, y) {
            Ok(r) => r.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Err(_) => f64::INFINITY,
        }
    }
}

fn local_search(p: &SolveProblem, start: usize, x0: Configuration) -> Result<StartTrace> {
    let mut obj = Objective {
        p,
        scale: p.scale(),
        evaluations: 0,
    };
    let goal = p.tol;

    let chart = Chart::around(&x0);
    let (y, _, simplex_iterations) = nelder_mead(&mut obj, &chart, chart.coords(&x0), goal);
    let mut x = chart.point(&y)?;

    let mut chart = Chart::around(&x);
    let mut y = chart.coords(&x);
    let mut r = obj.components(&chart, &y)?;
    let mut rn = norm(&r);
    let mut lambda = 1e-3;
    let mut newton_iterations = 0;
    while newton_iterations < LM_MAX_ITER && rn > 1e-3 * goal {
        newton_iterations += 1;
        let jac = jacobian(&mut obj, &chart, &y)?;
        let jm = DMatrix::from_fn(r.len(), y.len(), |i, k| jac[k][i]);
        let rv = DVector::from_column_slice(&r);
        let jtj = jm.transpose() * &jm;
        let jtr = jm.transpose() * rv;
        let mut improved = false;
        while lambda < 1e12 {
            let mut lhs = jtj.clone();
            for i in 0..y.len() {
                lhs[(i, i)] += lambda * (jtj[(i, i)] + 1e-12);
            }
            let Some(step) = lhs.lu().solve(&(-&jtr)) else {
                lambda *= 4.0;
                continue;
            };
            let trial: Vec<f64> = y.iter().zip(step.iter()).map(|(a, s)| a + s).collect();
            let rt = obj.components(&chart, &trial);
            match rt {
                Ok(rt) if norm(&rt) < rn => {
                    let small = step.norm() <= 1e-14 * (1.0 + norm(&y));
                    y = trial;
                    r = rt;
                    rn = norm(&r);
                    lambda = (lambda / 3.0).max(1e-12);
                    improved = !small;
                    break;
                }
                _ => lambda *= 4.0,
            }
        }
        if !improved {
            break;
        }
        if chart.stale(&y) {
            x = chart.point(&y)?;
            chart = Chart::around(&x);
            y = chart.coords(&x);
        }
    }
    x = canonical(&chart.point(&y)?);
    let residual = residual(p, &x)?;
    Ok(StartTrace {
        start,
        initial: x0,
        converged: residual <= p.threshold(),
        x,
        residual,
        simplex_iterations,
        newton_iterations,
        evaluations: obj.evaluations,
    })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|t| t * t).sum::<f64>().sqrt()
}

/// Central differences; column `k` is `dr/dy_k`.
fn jacobian(obj: &mut Objective, chart: &Chart, y: &[f64]) -> Result<Vec<Vec<f64>>> {
    (0..y.len())
        .map(|k| {
            let h = FD_STEP * (1.0 + y[k].abs());
            let mut yp = y.to_vec();
            let mut ym = y.to_vec();
            yp[k] += h;
            ym[k] -= h;
            let rp = obj.components(chart, &yp)?;
            let rm = obj.components(chart, &ym)?;
            Ok(rp
                .iter()
                .zip(&rm)
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect())
        })
        .collect()
}

/// Nelder-Mead on `|F| / scale`, stopping once it drops below `NM_HANDOFF` (or `goal`).
fn nelder_mead(
    obj: &mut Objective,
    chart: &Chart,
    y0: Vec<f64>,
    goal: f64,
) -> (Vec<f64>, f64, usize) {
    let n = y0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = obj.norm(chart, &y0);
    simplex.push((y0.clone(), f0));
    for i in 0..n {
        let mut y = y0.clone();
        y[i] += NM_STEP;
        let f = obj.norm(chart, &y);
        simplex.push((y, f));
    }
    let mut iterations = 0;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let size = simplex[1..]
            .iter()
            .map(|(y, _)| {
                y.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if best <= NM_HANDOFF.max(goal) || iterations >= NM_MAX_ITER || size < 1e-10 {
            break;
        }
        iterations += 1;
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(y, _)| y[k]).sum::<f64>() / n as f64)
            .collect();
        let toward = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let yr = toward(-1.0);
        let fr = obj.norm(chart, &yr);
        if fr < simplex[0].1 {
            let ye = toward(-2.0);
            let fe = obj.norm(chart, &ye);
            simplex[n] = if fe < fr { (ye, fe) } else { (yr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (yr, fr);
        } else {
            let (yc, fc) = if fr < simplex[n].1 {
                let y = toward(-0.5);
                let f = obj.norm(chart, &y);
                (y, f)
            } else {
                let y = toward(0.5);
                let f = obj.norm(chart, &y);
                (y, f)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (yc, fc);
            } else {
                let y_best = simplex[0].0.clone();
                for (y, f) in simplex[1..].iter_mut() {
                    for (v, b) in y.iter_mut().zip(&y_best) {
                        *v = b + 0.5 * (*v - b);
                    }
                    *f = obj.norm(chart, y);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (y, f) = simplex.swap_remove(0);
    (y, f, iterations)
}

/// Phase representative with the largest `a` coordinate real and positive.
fn canonical(x: &Configuration) -> Configuration {
    let pivot = Chart::around(x).pivot;
    x.rotated(-x.a()[pivot].arg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Component;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn planar(components: &[(Complex64, f64, f64)]) -> MassSpec {
        MassSpec::new(
            1,
            components
                .iter()
                .map(|&(m, s, w)| Component::Gaussian {
                    mean: vec![m],
                    sigma: s,
                    weight: w,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        let m = planar(&[(c(0.0, 0.0), 1.0, 1.0)]);
        assert!(SolveProblem::new(vec![m.clone()], vec![0], 2).is_err());
        assert!(SolveProblem::new(vec![m.clone()], vec![1, 1], 2).is_err());
        assert!(SolveProblem::new(vec![m.clone(), m.clone()], vec![1, 1], 2).is_err());
        assert!(SolveProblem::new(vec![m.clone()], vec![32], 2).is_err());
        assert!(SolveProblem::new(vec![m.clone()], vec![1], 1).is_err());
        let p = SolveProblem::new(vec![m], vec![1], 2).unwrap();
        assert!(p.clone().with_grid(100).is_err());
        assert!(p.clone().with_starts(0).is_err());
        assert!(p.with_tol(-1.0).is_err());
    }

    #[test]
    fn residual_examples() {
        let m = planar(&[(c(0.5, -0.25), 0.8, 1.0)]);
        let p = SolveProblem::new(vec![m], vec![1], 2).unwrap();
        let at_mean = Configuration::from_apex(c(0.5, -0.25));
        assert!(residual(&p, &at_mean).unwrap() < 1e-8);
        let x = Configuration::from_apex(c(1.5, 0.3));
        let r = residual(&p, &x).unwrap();
        assert!((residual(&p, &x.rotated(1.1)).unwrap() - r).abs() < 1e-9);
        let deg = Configuration::new(vec![c(0.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert!((residual(&p, &deg).unwrap() - 1.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn hyperplane_examples() {
        let h = hyperplane_of(&Configuration::from_reals(&[1.0, 0.0, 0.0, 0.0]).unwrap()).unwrap();
        assert!(h.apex.unwrap().norm() < 1e-15);
        let x = Configuration::from_reals(&[1.0, 0.0, -1.0, 0.0]).unwrap();
        let h = hyperplane_of(&x).unwrap();
        assert!((h.apex.unwrap() - 1.0).norm() < 1e-15);
        assert!(x.project(&[h.apex.unwrap()]).norm() < 1e-10);
        let deg = Configuration::new(vec![c(0.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert!(hyperplane_of(&deg).is_err());
    }

    #[test]
    fn symmetric_pair_has_apex_at_origin() {
        let m = planar(&[(c(2.0, 0.0), 0.7, 1.0), (c(-2.0, 0.0), 0.7, 1.0)]);
        let p = SolveProblem::new(vec![m], vec![1], 2)
            .unwrap()
            .with_starts(6)
            .unwrap()
            .with_seed(5);
        let r = solve(&p).unwrap();
        assert!(r.converged);
        assert!(r.residual <= p.threshold());
        assert!(r
            .witnesses
            .iter()
            .any(|w| w.hyperplane.apex.unwrap().norm() < 1e-4));
    }

    #[test]
    fn single_gaussian_apex_at_mean() {
        let c0 = c(-0.7, 1.2);
        let p = SolveProblem::new(vec![planar(&[(c0, 0.9, 2.0)])], vec![1], 3)
            .unwrap()
            .with_starts(4)
            .unwrap()
            .with_seed(1);
        let r = solve(&p).unwrap();
        assert!(r.converged);
        assert!((r.hyperplane.apex.unwrap() - c0).norm() < 1e-4);
        assert!(r.per_mass[0].l2 < 1e-6);
    }

    #[test]
    fn solve_from_rejects_degenerate_start() {
        let p = SolveProblem::new(vec![planar(&[(c(0.0, 0.0), 1.0, 1.0)])], vec![1], 2).unwrap();
        let deg = Configuration::new(vec![c(0.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert!(matches!(
            solve_from(&p, &deg),
            Err(Error::DegenerateConfiguration { .. })
        ));
    }

    #[test]
    fn same_seed_same_result() {
        let m = planar(&[(c(1.0, 0.0), 0.6, 1.0), (c(-1.0, 1.0), 1.1, 0.5)]);
        let p = SolveProblem::new(vec![m], vec![1], 2)
            .unwrap()
            .with_starts(3)
            .unwrap()
            .with_seed(9);
        let a = solve(&p).unwrap();
        let b = solve(&p).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.residual.to_bits(), b.residual.to_bits());
    }

    #[test]
    fn stacked_problem_layout() {
        let m = planar(&[(c(0.0, 0.0), 1.0, 1.0)]);
        let lifted = MassSpec::gaussian(vec![c(0.0, 0.0); 3], 1.0, 1.0).unwrap();
        assert!(SolveProblem::stacked(vec![m], 3, 2).is_err());
        let p = SolveProblem::stacked(vec![lifted], 3, 2).unwrap();
        assert_eq!(p.exponents(), &[1, 2, 3]);
        assert_eq!(p.annihilated(2), 3);
    }
}
