//! Small scalar solvers.

/// Bisection for a root of f on [a, b]; requires a sign change (or a zero
/// endpoint) and returns the midpoint of the final bracket.
pub fn bisect(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    let fhi = f(hi);
    if fhi == 0.0 {
        return hi;
    }
    debug_assert!(flo * fhi < 0.0, "bisect: no sign change on [{a}, {b}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < tol {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

/// Newton iteration safeguarded by a bracket: falls back to bisection
/// whenever the Newton step leaves [lo, hi] or the derivative degenerates.
/// Returns the root of f (whose sign must differ at the bracket ends).
pub fn newton_bracketed(
    f: impl Fn(f64) -> (f64, f64),
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> f64 {
    let (mut flo, _) = f(lo);
    if flo == 0.0 {
        return lo;
    }
    if f(hi).0 == 0.0 {
        return hi;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return x;
        }
        if flo * fx < 0.0 {
            hi = x;
        } else {
            lo = x;
            flo = fx;
        }
        let mut next = if dfx != 0.0 { x - fx / dfx } else { f64::NAN };
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() < tol {
            return next;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bisect_finds_cosine_root() {
        let r = bisect(|x| x.cos(), 0.0, 3.0, 1e-14);
        assert_relative_eq!(r, std::f64::consts::FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn newton_bracketed_handles_flat_regions() {
        // f has a nearly flat stretch; the bracket keeps iterations safe
        let f = |x: f64| ((x - 1.0).powi(3) + 1e-3 * (x - 1.0), 3.0 * (x - 1.0).powi(2) + 1e-3);
        let r = newton_bracketed(f, -4.0, 5.0, 1e-14);
        assert_relative_eq!(r, 1.0, epsilon = 1e-9);
    }
}
