//! Small scalar routines shared by the geometric criteria: adaptive Simpson
//! quadrature, bisection on a boolean predicate, and golden-section search.

/// Quadrature result together with the number of accepted panels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetExhausted {
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

const MAX_DEPTH: u32 = 60;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `tol`.
///
/// The interval is first split into `initial` equal panels so that isolated
/// kinks are not skipped by the first estimate. Panels are processed in a
/// fixed depth-first order, which makes the result independent of anything
/// but the inputs.
pub fn adaptive_simpson<F>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    initial: usize,
    max_panels: usize,
) -> Result<Quadrature, BudgetExhausted>
where
    F: FnMut(f64) -> f64,
{
    if a == b {
        return Ok(Quadrature { value: 0.0, panels: 0 });
    }
    let n = initial.max(1);
    let h = (b - a) / n as f64;
    let mut stack = Vec::with_capacity(64);
    let mut left = f(a);
    let mut initial_panels = Vec::with_capacity(n);
    for i in 0..n {
        let pa = a + h * i as f64;
        let pb = if i + 1 == n { b } else { a + h * (i + 1) as f64 };
        let pm = 0.5 * (pa + pb);
        let fm = f(pm);
        let fb = f(pb);
        initial_panels.push(Panel {
            a: pa,
            b: pb,
            fa: left,
            fm,
            fb,
            whole: simpson(pa, pb, left, fm, fb),
            tol: tol / n as f64,
            depth: 0,
        });
        left = fb;
    }
    // reversed so that panels are popped left to right
    stack.extend(initial_panels.into_iter().rev());

    let mut total = 0.0;
    let mut panels = 0usize;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;
        if delta.abs() <= 15.0 * p.tol || p.depth >= MAX_DEPTH || (m - p.a) <= f64::EPSILON * m.abs() {
            total += left + right + delta / 15.0;
            panels += 1;
            if panels > max_panels {
                return Err(BudgetExhausted { panels });
            }
            continue;
        }
        if stack.len() + panels > max_panels {
            return Err(BudgetExhausted { panels: stack.len() + panels });
        }
        stack.push(Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
            tol: 0.5 * p.tol,
            depth: p.depth + 1,
        });
        stack.push(Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
            tol: 0.5 * p.tol,
            depth: p.depth + 1,
        });
    }
    Ok(Quadrature { value: total, panels })
}

/// Locates the switch point of a predicate that holds at `inside` and fails
/// at `outside`, to within `tol`. Returns the last point known to satisfy
/// the predicate.
pub fn bisect_predicate<P>(mut pred: P, mut inside: f64, mut outside: f64, tol: f64, max_iter: usize) -> Option<f64>
where
    P: FnMut(f64) -> bool,
{
    for _ in 0..max_iter {
        if (outside - inside).abs() <= tol {
            return Some(inside);
        }
        let mid = 0.5 * (inside + outside);
        if pred(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    if (outside - inside).abs() <= tol {
        Some(inside)
    } else {
        None
    }
}

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`.
/// Returns `(argmin, min)`.
pub fn golden_section_min<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while (b - a).abs() > tol && iter < 200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
        iter += 1;
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)].into_iter().fold((x, fx), |best, cand| if cand.1 < best.1 { cand } else { best })
}

/// `n` points from `start` to `end` inclusive, geometrically spaced.
pub fn log_space(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let (ls, le) = (start.ln(), end.ln());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        start
                    } else if i + 1 == n {
                        end
                    } else {
                        (ls + (le - ls) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// `n` points from `start` to `end` inclusive, evenly spaced.
pub fn lin_space(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n).map(|i| if i + 1 == n { end } else { start + (end - start) * i as f64 / (n - 1) as f64 }).collect(),
    }
}
