//! Local minimizers: L-BFGS with backtracking (gradient) and Powell's
//! conjugate-direction method with Brent line searches (derivative-free).

use std::cell::RefCell;

use crate::error::{Error, Result};

pub trait Objective {
    fn value(&self, x: &[f64]) -> f64;

    /// Value and analytic gradient, when available.
    fn value_and_gradient(&self, _x: &[f64]) -> Option<(f64, Vec<f64>)> {
        None
    }
}

impl<F: Fn(&[f64]) -> f64> Objective for F {
    fn value(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Gradient,
    DerivativeFree,
}

impl Method {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gradient" | "lbfgs" | "l-bfgs" => Ok(Method::Gradient),
            "derivative-free" | "powell" => Ok(Method::DerivativeFree),
            _ => Err(Error::Parse(format!("unknown optimizer '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Gradient => "lbfgs",
            Method::DerivativeFree => "powell",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub method: Method,
    /// Cap on objective evaluations (a gradient evaluation counts as one).
    pub max_evaluations: usize,
    /// Gradient infinity-norm stop for L-BFGS.
    pub gtol: f64,
    /// Relative decrease stop for Powell and L-BFGS stagnation.
    pub ftol: f64,
    /// Central-difference step when no analytic gradient exists.
    pub fd_step: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            method: Method::Gradient,
            max_evaluations: 20_000,
            gtol: 1e-8,
            ftol: 1e-14,
            fd_step: 1e-6,
        }
    }
}

impl OptimizeOptions {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    BudgetExhausted,
    /// The line search could not make progress; the best point is returned.
    Stalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub status: Status,
    pub evaluations: usize,
}

struct Budget {
    evals: usize,
    cap: usize,
    best: Option<(f64, Vec<f64>)>,
}

struct Tracked<'a, O: Objective + ?Sized> {
    obj: &'a O,
    fd_step: f64,
    state: RefCell<Budget>,
}

impl<O: Objective + ?Sized> Tracked<'_, O> {
    fn note(&self, x: &[f64], f: f64, cost: usize) {
        let mut s = self.state.borrow_mut();
        s.evals += cost;
        if s.best.as_ref().is_none_or(|(b, _)| f < *b) {
            s.best = Some((f, x.to_vec()));
        }
    }

    fn exhausted(&self) -> bool {
        let s = self.state.borrow();
        s.evals >= s.cap
    }

    fn value(&self, x: &[f64]) -> f64 {
        let f = self.obj.value(x);
        self.note(x, f, 1);
        f
    }

    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        if let Some((f, g)) = self.obj.value_and_gradient(x) {
            self.note(x, f, 1);
            return (f, g);
        }
        let f = self.value(x);
        let mut g = vec![0.0; x.len()];
        let mut xp = x.to_vec();
        for i in 0..x.len() {
            let h = self.fd_step;
            xp[i] = x[i] + h;
            let fp = self.value(&xp);
            xp[i] = x[i] - h;
            let fm = self.value(&xp);
            xp[i] = x[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
        (f, g)
    }

    fn finish(self, status: Status) -> OptimizeResult {
        let s = self.state.into_inner();
        let (value, x) = s.best.expect("at least one evaluation");
        OptimizeResult {
            x,
            value,
            status,
            evaluations: s.evals,
        }
    }
}

pub fn optimize<O: Objective + ?Sized>(
    objective: &O,
    initial: &[f64],
    options: &OptimizeOptions,
) -> OptimizeResult {
    let tracked = Tracked {
        obj: objective,
        fd_step: options.fd_step,
        state: RefCell::new(Budget {
            evals: 0,
            cap: options.max_evaluations.max(1),
            best: None,
        }),
    };
    let status = if initial.is_empty() {
        tracked.value(initial);
        Status::Converged
    } else {
        match options.method {
            Method::Gradient => lbfgs(&tracked, initial, options),
            Method::DerivativeFree => powell(&tracked, initial, options),
        }
    };
    tracked.finish(status)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn lbfgs<O: Objective + ?Sized>(t: &Tracked<O>, x0: &[f64], opt: &OptimizeOptions) -> Status {
    const MEMORY: usize = 10;
    let mut x = x0.to_vec();
    let (mut f, mut g) = t.value_and_gradient(&x);
    let mut hist: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::new();
    let mut stalls = 0;
    loop {
        if g.iter().fold(0.0f64, |m, v| m.max(v.abs())) < opt.gtol {
            return Status::Converged;
        }
        if t.exhausted() {
            return Status::BudgetExhausted;
        }
        // Two-loop recursion for d = −H g.
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(hist.len());
        for (s, y, rho) in hist.iter().rev() {
            let a = rho * dot(s, &q);
            q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
            alphas.push(a);
        }
        let gamma = hist
            .last()
            .map(|(s, y, _)| dot(s, y) / dot(y, y))
            .unwrap_or_else(|| {
                let gn = dot(&g, &g).sqrt();
                if gn > 0.0 {
                    (1.0 / gn).min(1.0)
                } else {
                    1.0
                }
            });
        q.iter_mut().for_each(|v| *v *= gamma);
        for ((s, y, rho), a) in hist.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &q);
            q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
        }
        let mut d: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            hist.clear();
            d = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let xn: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
            let fnew = t.value(&xn);
            if fnew <= f + 1e-4 * step * slope {
                accepted = Some(xn);
                break;
            }
            if t.exhausted() {
                return Status::BudgetExhausted;
            }
            step *= 0.5;
        }
        let Some(xn) = accepted else {
            return Status::Stalled;
        };
        let (fnew, gn) = t.value_and_gradient(&xn);
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
            if hist.len() == MEMORY {
                hist.remove(0);
            }
            hist.push((s, y, 1.0 / sy));
        }
        let decrease = f - fnew;
        x = xn;
        f = fnew;
        g = gn;
        if decrease <= opt.ftol * f.abs().max(1.0) {
            stalls += 1;
            if stalls >= 3 {
                return Status::Converged;
            }
        } else {
            stalls = 0;
        }
    }
}

fn powell<O: Objective + ?Sized>(t: &Tracked<O>, x0: &[f64], opt: &OptimizeOptions) -> Status {
    let n = x0.len();
    let mut dirs: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut d = vec![0.0; n];
            d[i] = 1.0;
            d
        })
        .collect();
    let mut x = x0.to_vec();
    let mut f = t.value(&x);
    loop {
        let (x_start, f_start) = (x.clone(), f);
        let mut biggest = (0usize, 0.0f64);
        for (i, d) in dirs.iter().enumerate() {
            let f_before = f;
            let (xn, fnew) = line_minimize(t, &x, d, f);
            x = xn;
            f = fnew;
            if f_before - f > biggest.1 {
                biggest = (i, f_before - f);
            }
            if t.exhausted() {
                return Status::BudgetExhausted;
            }
        }
        if 2.0 * (f_start - f) <= opt.ftol * (f_start.abs() + f.abs()) + 1e-300 {
            return Status::Converged;
        }
        let new_dir: Vec<f64> = x.iter().zip(&x_start).map(|(a, b)| a - b).collect();
        let norm = dot(&new_dir, &new_dir).sqrt();
        if norm > 0.0 {
            let extrap: Vec<f64> = x.iter().zip(&new_dir).map(|(a, d)| a + d).collect();
            let fe = t.value(&extrap);
            if fe < f_start {
                let unit: Vec<f64> = new_dir.iter().map(|v| v / norm).collect();
                let (xn, fnew) = line_minimize(t, &x, &unit, f);
                x = xn;
                f = fnew;
                dirs.remove(biggest.0);
                dirs.push(unit);
            }
        }
        if t.exhausted() {
            return Status::BudgetExhausted;
        }
    }
}

/// Brent minimization of `f(x + a·d)` over `a`, starting from a golden bracket.
fn line_minimize<O: Objective + ?Sized>(
    t: &Tracked<O>,
    x: &[f64],
    d: &[f64],
    f0: f64,
) -> (Vec<f64>, f64) {
    const GOLD: f64 = 1.618_033_988_749_895;
    const CGOLD: f64 = 0.381_966_011_250_105;
    let at = |a: f64| -> Vec<f64> { x.iter().zip(d).map(|(xi, di)| xi + a * di).collect() };
    let eval = |a: f64| t.value(&at(a));

    let (mut a, mut fa) = (0.0, f0);
    let (mut b, mut fb) = (0.1, eval(0.1));
    if fb > fa {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = b + GOLD * (b - a);
    let mut fc = eval(c);
    let mut guard = 0;
    while fb > fc && guard < 60 && !t.exhausted() {
        a = b;
        b = c;
        fb = fc;
        c = b + GOLD * (b - a);
        fc = eval(c);
        guard += 1;
    }
    let (mut lo, mut hi) = if a < c { (a, c) } else { (c, a) };
    let (mut xm, mut w, mut v) = (b, b, b);
    let (mut fx, mut fw, mut fv) = (fb, fb, fb);
    let mut e: f64 = 0.0;
    let mut step: f64 = 0.0;
    for _ in 0..100 {
        if t.exhausted() {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let tol1 = 1e-10 * xm.abs() + 1e-12;
        let tol2 = 2.0 * tol1;
        if (xm - mid).abs() <= tol2 - 0.5 * (hi - lo) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (xm - w) * (fx - fv);
            let mut q = (xm - v) * (fx - fw);
            let mut p = (xm - v) * q - (xm - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = step;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (lo - xm) && p < q * (hi - xm) {
                step = p / q;
                let u = xm + step;
                if u - lo < tol2 || hi - u < tol2 {
                    step = tol1.copysign(mid - xm);
                }
                golden = false;
            }
        }
        if golden {
            e = if xm >= mid { lo - xm } else { hi - xm };
            step = CGOLD * e;
        }
        let u = if step.abs() >= tol1 {
            xm + step
        } else {
            xm + tol1.copysign(step)
        };
        let fu = eval(u);
        if fu <= fx {
            if u >= xm {
                lo = xm;
            } else {
                hi = xm;
            }
            v = w;
            fv = fw;
            w = xm;
            fw = fx;
            xm = u;
            fx = fu;
        } else {
            if u < xm {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == xm {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == xm || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    if fx < f0 {
        (at(xm), fx)
    } else {
        (x.to_vec(), f0)
    }
}
