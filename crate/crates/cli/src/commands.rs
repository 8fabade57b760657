use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use qfan::bounds;
use qfan::fan::{self, AdversarialSpec};
use qfan::fourier;
use qfan::measure::{Configuration, MassSpec, PlanarMassSpec};
use qfan::solver::{self, SolveProblem, SolveResult};
use serde::Serialize;

use crate::io::{self, InputFile, Manifest};
use crate::{
    AdversarialArgs, CertifyArgs, Command, Fan6Args, ScanArgs, SolveArgs, SolverFlags, TailsumArgs,
    VerifyArgs, EXIT_INPUT, EXIT_NOT_CONVERGED, EXIT_VIOLATION, THREADS_ENV,
};

/// Files touched by one run.
#[derive(Default)]
struct Run {
    inputs: Vec<InputFile>,
    outputs: Vec<String>,
}

impl Run {
    fn masses(&mut self, path: &str) -> Result<Vec<MassSpec>> {
        let input = io::read(path)?;
        let parsed = io::parse_masses(path, &input.contents);
        self.inputs.push(input);
        parsed
    }

    fn mass(&mut self, path: &str) -> Result<MassSpec> {
        let mut masses = self.masses(path)?;
        if masses.len() != 1 {
            bail!("{path}: expected one mass, found {}", masses.len());
        }
        Ok(masses.remove(0))
    }

    fn planar(&mut self, path: &str) -> Result<PlanarMassSpec> {
        self.mass(path)?
            .as_planar()
            .with_context(|| format!("{path}: a planar (dim 1) mass is required"))
    }

    fn json<T: Serialize + ?Sized>(&mut self, path: &str, value: &T) -> Result<()> {
        io::write_json(path, value)?;
        self.outputs.push(path.to_string());
        Ok(())
    }

    fn csv<T: Serialize>(&mut self, path: &str, rows: &[T]) -> Result<()> {
        io::write_csv(path, rows)?;
        self.outputs.push(path.to_string());
        Ok(())
    }
}

impl Command {
    fn out(&self) -> &str {
        match self {
            Command::Solve(a) => &a.out,
            Command::Verify(a) => &a.out,
            Command::Scan(a) => &a.out,
            Command::Fan6(a) => &a.out,
            Command::Adversarial(a) => &a.out,
            Command::Certify(a) => &a.out,
            Command::Tailsum(a) => &a.out,
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::Solve(a) => Some(a.solver.seed),
            Command::Verify(a) => Some(a.solver.seed),
            Command::Adversarial(a) => Some(a.seed),
            _ => None,
        }
    }

    fn grid(&self) -> Option<usize> {
        match self {
            Command::Solve(a) => Some(a.solver.grid),
            Command::Verify(a) => Some(a.solver.grid),
            Command::Scan(a) => Some(a.grid),
            Command::Certify(a) => Some(a.grid),
            _ => None,
        }
    }
}

/// Runs `cmd` and writes `<out>.manifest.json`, returning the exit status.
pub fn run(cmd: &Command) -> Result<u8> {
    let out = cmd.out();
    io::ensure_parent(out)?;
    let mut run = Run::default();
    let result = match cmd {
        Command::Solve(a) => solve(&mut run, a),
        Command::Verify(a) => verify(&mut run, a),
        Command::Scan(a) => scan(&mut run, a),
        Command::Fan6(a) => fan6(&mut run, a),
        Command::Adversarial(a) => adversarial(&mut run, a),
        Command::Certify(a) => certify(&mut run, a),
        Command::Tailsum(a) => tailsum(&mut run, a),
    };
    let (exit_code, error) = match &result {
        Ok(code) => (*code, None),
        Err(e) => (EXIT_INPUT, Some(format!("{e:#}"))),
    };
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: cmd,
        seed: cmd.seed(),
        grid: cmd.grid(),
        threads: std::env::var(THREADS_ENV).ok(),
        inputs: run.inputs,
        outputs: run.outputs,
        exit_code,
        error,
    };
    io::write_manifest_file(out, &manifest)?;
    result
}

fn configure(p: SolveProblem, f: &SolverFlags) -> Result<SolveProblem> {
    Ok(p.with_grid(f.grid)?
        .with_starts(f.starts)?
        .with_tol(f.tol)?
        .with_seed(f.seed))
}

fn report_convergence(r: &SolveResult) -> u8 {
    if r.converged {
        0
    } else {
        eprintln!(
            "not converged: residual {:.3e} above threshold {:.3e}",
            r.residual, r.threshold
        );
        EXIT_NOT_CONVERGED
    }
}

fn solve(run: &mut Run, a: &SolveArgs) -> Result<u8> {
    let mut masses = Vec::new();
    for path in &a.measures {
        masses.extend(run.masses(path)?);
    }
    let p = configure(
        SolveProblem::new(masses, a.exponents.clone(), a.q)?,
        &a.solver,
    )?;
    let r = solver::solve(&p)?;
    let mut value = serde_json::to_value(&r)?;
    value["apex"] = serde_json::to_value(r.hyperplane.apex)?;
    value["problem"] = serde_json::to_value(&p)?;
    run.json(&a.out, &value)?;
    Ok(report_convergence(&r))
}

#[derive(Serialize)]
struct VerifyRow {
    mass: usize,
    n: u32,
    q: u32,
    total: f64,
    l2: f64,
    l2_bound: f64,
    l2_pass: bool,
    linf: f64,
    linf_bound: f64,
    /// `pass`, `fail`, or `skipped` when the acceleration estimate is unreliable.
    linf_status: &'static str,
    acceleration_reliable: bool,
    residual: f64,
    converged: bool,
}

fn verify(run: &mut Run, a: &VerifyArgs) -> Result<u8> {
    let mut masses = Vec::new();
    for path in &a.measures {
        masses.extend(run.masses(path)?);
    }
    let count = masses.len();
    let totals: Vec<f64> = masses.iter().map(MassSpec::total_mass).collect();
    let p = configure(SolveProblem::stacked(masses, a.n, a.q)?, &a.solver)?;
    let r = solver::solve(&p)?;
    let mut violated = false;
    let rows: Vec<VerifyRow> = (0..count)
        .map(|j| {
            let rep = &r.per_mass[j * a.n as usize];
            let l2_bound = bounds::l2_bound(a.q, a.n as usize) * totals[j];
            let l2_pass = rep.l2 <= l2_bound + a.slack;
            let linf_status = if !rep.acceleration_reliable {
                "skipped"
            } else if rep.linf <= rep.bound_linf + a.slack {
                "pass"
            } else {
                "fail"
            };
            violated |= !l2_pass || linf_status == "fail";
            VerifyRow {
                mass: j,
                n: a.n,
                q: a.q,
                total: totals[j],
                l2: rep.l2,
                l2_bound,
                l2_pass,
                linf: rep.linf,
                linf_bound: rep.bound_linf,
                linf_status,
                acceleration_reliable: rep.acceleration_reliable,
                residual: r.residual,
                converged: r.converged,
            }
        })
        .collect();
    run.csv(&a.out, &rows)?;
    run.json(&io::sibling(&a.out, "result.json"), &r)?;
    let code = report_convergence(&r);
    if code != 0 {
        return Ok(code);
    }
    if violated {
        eprintln!("bound violated; see {}", a.out);
        return Ok(EXIT_VIOLATION);
    }
    Ok(0)
}

#[derive(Serialize)]
struct ProfileRow {
    theta: f64,
    f_theta: f64,
}

#[derive(Serialize)]
struct CoefficientRow {
    m: usize,
    re_c: f64,
    im_c: f64,
    abs_c: f64,
}

fn scan_configuration(a: &ScanArgs, dim: usize) -> Result<Configuration> {
    if let Some(v) = &a.x {
        let x = Configuration::from_reals(v)?;
        if x.dim() != dim {
            bail!("--x has dimension {}, the mass has {dim}", x.dim());
        }
        return Ok(x);
    }
    if dim != 1 {
        bail!("a mass of dimension {dim} needs --x");
    }
    let apex = match a.apex.as_deref() {
        None => Complex64::default(),
        Some([re, im]) => Complex64::new(*re, *im),
        Some(v) => bail!("--apex takes re,im; found {} values", v.len()),
    };
    Ok(Configuration::from_apex(apex))
}

fn scan(run: &mut Run, a: &ScanArgs) -> Result<u8> {
    let m = run.mass(&a.measure)?;
    let x = scan_configuration(a, m.dim())?;
    let p = fourier::profile(&m, &x, a.q, a.grid)?;
    let profile: Vec<ProfileRow> = p
        .samples()
        .iter()
        .enumerate()
        .map(|(k, &f)| ProfileRow {
            theta: p.theta(k),
            f_theta: f,
        })
        .collect();
    let coeffs: Vec<CoefficientRow> = p
        .nonnegative_coefficients()
        .iter()
        .enumerate()
        .map(|(m, c)| CoefficientRow {
            m,
            re_c: c.re,
            im_c: c.im,
            abs_c: c.norm(),
        })
        .collect();
    run.csv(&a.out, &profile)?;
    let coeff_path = a
        .coeffs
        .clone()
        .unwrap_or_else(|| io::sibling(&a.out, "coeffs.csv"));
    run.csv(&coeff_path, &coeffs)?;
    Ok(0)
}

#[derive(Serialize)]
struct FanReport {
    total: f64,
    #[serde(flatten)]
    fan: fan::SixFan,
}

fn fan6(run: &mut Run, a: &Fan6Args) -> Result<u8> {
    let p = run.planar(&a.measure)?;
    let fan = fan::regular_six_fan_with(&p, a.scan_points)?;
    run.json(
        &a.out,
        &FanReport {
            total: p.total_mass(),
            fan,
        },
    )?;
    Ok(0)
}

fn adversarial(run: &mut Run, a: &AdversarialArgs) -> Result<u8> {
    let spec = AdversarialSpec::new(a.q, a.n, a.r, a.delta)?;
    let p = fan::adversarial_mass(&spec, a.seed)?;
    run.json(&a.out, &MassSpec::from_planar(&p))?;
    Ok(0)
}

#[derive(Serialize)]
struct CertifyRow {
    check: &'static str,
    q: u32,
    center_re: f64,
    center_im: f64,
    value: f64,
    /// Upper bound for `center_linf`, lower bound for `sweep_min`.
    bound: f64,
    pass: bool,
}

#[derive(Serialize)]
struct SweepRow {
    center_re: f64,
    center_im: f64,
    deviation: f64,
}

fn sweep_bounds(a: &CertifyArgs, p: &PlanarMassSpec) -> Result<(Complex64, Complex64)> {
    match a.window.as_deref() {
        None => Ok(fan::sweep_window(p)),
        Some([lr, li, hr, hi]) if lr < hr && li < hi => {
            Ok((Complex64::new(*lr, *li), Complex64::new(*hr, *hi)))
        }
        Some(_) => bail!("--window takes lo_re,lo_im,hi_re,hi_im with lo < hi"),
    }
}

fn certify(run: &mut Run, a: &CertifyArgs) -> Result<u8> {
    let p = run.planar(&a.measure)?;
    let total = p.total_mass();
    let mut rows = Vec::new();
    let mut violated = false;
    match fan::centerpoint_certificate(&p, a.q, a.grid) {
        Ok(c) => rows.push(CertifyRow {
            check: "center_linf",
            q: a.q,
            center_re: c.fan.center.re,
            center_im: c.fan.center.im,
            value: c.linf,
            bound: c.bound,
            pass: true,
        }),
        Err(qfan::Error::CertificateViolation {
            deviation, bound, ..
        }) => {
            let center = fan::regular_six_fan(&p)?.center;
            violated = true;
            rows.push(CertifyRow {
                check: "center_linf",
                q: a.q,
                center_re: center.re,
                center_im: center.im,
                value: deviation,
                bound,
                pass: false,
            });
        }
        Err(e) => return Err(e.into()),
    }
    if a.sweep > 0 {
        let window = sweep_bounds(a, &p)?;
        let s = fan::center_grid_sweep(&p, a.q, window, a.sweep, a.grid)?;
        let (bound, pass) = match a.lower_n {
            Some(n) => {
                let b = (bounds::adversarial_linf_lower_bound(a.q, n) - 1e-3) * total;
                (b, s.min_deviation >= b)
            }
            None => (0.0, true),
        };
        violated |= !pass;
        rows.push(CertifyRow {
            check: "sweep_min",
            q: a.q,
            center_re: s.argmin.re,
            center_im: s.argmin.im,
            value: s.min_deviation,
            bound,
            pass,
        });
        let points: Vec<SweepRow> = s
            .points
            .iter()
            .map(|pt| SweepRow {
                center_re: pt.center.re,
                center_im: pt.center.im,
                deviation: pt.deviation,
            })
            .collect();
        run.csv(&io::sibling(&a.out, "sweep.csv"), &points)?;
    }
    run.csv(&a.out, &rows)?;
    if violated {
        eprintln!("bound violated; see {}", a.out);
        return Ok(EXIT_VIOLATION);
    }
    Ok(0)
}

fn tailsum(run: &mut Run, a: &TailsumArgs) -> Result<u8> {
    let check = bounds::tail_sum_checked(a.q, a.n)?;
    run.json(&a.out, &check)?;
    Ok(0)
}
