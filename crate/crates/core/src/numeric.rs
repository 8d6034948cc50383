//! Small numerical building blocks: bracketing bisection, golden-section
//! maximization of unimodal functions, and compensated summation.

/// `(sqrt(5) - 1) / 2`
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Result of [`bisect_decreasing`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    pub x: f64,
    pub residual: f64,
    pub iterations: u32,
}

/// Finds `x` in `[lo, hi]` with `|f(x) - target| <= tol`, assuming `f` is
/// nonincreasing on the interval and `f(hi) <= target <= f(lo)`.
///
/// Stops after `max_iter` halvings and returns the best iterate seen, so the
/// caller must inspect `residual`.
pub fn bisect_decreasing<F>(
    f: F,
    target: f64,
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: u32,
) -> Bisection
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut best = Bisection {
        x: lo,
        residual: (f(lo) - target).abs(),
        iterations: 0,
    };
    let r_hi = (f(hi) - target).abs();
    if r_hi < best.residual {
        best.x = hi;
        best.residual = r_hi;
    }
    let mut it = 0;
    while best.residual > tol && it < max_iter {
        it += 1;
        let mid = 0.5 * (a + b);
        let v = f(mid);
        let r = (v - target).abs();
        if r < best.residual {
            best.x = mid;
            best.residual = r;
        }
        if v > target {
            a = mid;
        } else {
            b = mid;
        }
        if a == b {
            break;
        }
    }
    best.iterations = it;
    best
}

/// Maximizes a unimodal (quasi-concave) function on `[lo, hi]` by
/// golden-section search, shrinking the bracket below `tol`.
///
/// Returns `(argmax, max)`.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    if !(hi > lo) {
        return (lo, f(lo));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    // Each step shrinks the bracket by INV_PHI; 400 steps cover any f64 range.
    for _ in 0..400 {
        if b - a <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    // The bracket endpoints are candidates too: the maximum of a monotone
    // function sits on the boundary and interior probes never reach it.
    let mid = 0.5 * (a + b);
    let mut best = (mid, f(mid));
    for x in [lo, hi, c, d] {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        Self {
            sum: 0.0,
            comp: 0.0,
        }
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator into this one.
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.comp += other.comp;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
