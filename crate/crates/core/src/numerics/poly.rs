//! Closed-form roots of monic complex polynomials up to degree four.

use super::matrix::C64;

/// Evaluates `x^4 + c[3] x^3 + c[2] x^2 + c[1] x + c[0]` and its first
/// derivative by Horner's rule.
pub fn eval_monic_quartic(c: &[C64; 4], x: C64) -> (C64, C64) {
    let mut p = C64::new(1.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for k in (0..4).rev() {
        dp = dp * x + p;
        p = p * x + c[k];
    }
    (p, dp)
}

/// Roots of `x^2 + b x + c`, avoiding cancellation.
pub fn solve_quadratic(b: C64, c: C64) -> [C64; 2] {
    let disc = (b * b - 4.0 * c).sqrt();
    // Pick the sign that adds magnitudes.
    let q = if (b.conj() * disc).re >= 0.0 {
        -(b + disc) * 0.5
    } else {
        -(b - disc) * 0.5
    };
    if q == C64::new(0.0, 0.0) {
        return [C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    }
    [q, c / q]
}

/// Roots of `x^3 + b x^2 + c x + d` by Cardano's formula in complex arithmetic.
pub fn solve_cubic(b: C64, c: C64, d: C64) -> [C64; 3] {
    // x = y - b/3  =>  y^3 + p y + q = 0
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut u3 = -q / 2.0 + disc;
    let alt = -q / 2.0 - disc;
    if alt.norm() > u3.norm() {
        u3 = alt;
    }
    let omega = C64::new(-0.5, 3f64.sqrt() / 2.0);
    if u3.norm() == 0.0 {
        // p = q = 0: triple root.
        return [-shift; 3];
    }
    let u = u3.cbrt();
    let mut roots = [C64::new(0.0, 0.0); 3];
    let mut uk = u;
    for r in roots.iter_mut() {
        let v = -p / (3.0 * uk);
        *r = uk + v - shift;
        uk *= omega;
    }
    roots
}

/// Roots of the monic quartic `x^4 + c[3] x^3 + c[2] x^2 + c[1] x + c[0]`
/// by Ferrari's method, each followed by one Newton step that is kept only
/// if it reduces the residual.
pub fn solve_quartic(c: &[C64; 4]) -> [C64; 4] {
    let a3 = c[3];
    let shift = a3 / 4.0;
    // x = y - a3/4  =>  y^4 + p y^2 + q y + r = 0
    let p = c[2] - 3.0 * a3 * a3 / 8.0;
    let q = c[1] - a3 * c[2] / 2.0 + a3 * a3 * a3 / 8.0;
    let r = c[0] - a3 * c[1] / 4.0 + a3 * a3 * c[2] / 16.0 - 3.0 * a3.powi(4) / 256.0;

    let scale = 1.0 + p.norm() + q.norm().sqrt() + r.norm().sqrt();
    let ys = if q.norm() <= 1e-14 * scale * scale * scale {
        // Biquadratic: y^2 = z with z^2 + p z + r = 0.
        let zs = solve_quadratic(p, r);
        [zs[0].sqrt(), -zs[0].sqrt(), zs[1].sqrt(), -zs[1].sqrt()]
    } else {
        // Resolvent cubic m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0; any
        // nonzero root works, the largest is best conditioned.
        let ms = solve_cubic(p, p * p / 4.0 - r, -q * q / 8.0);
        let m = ms
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(ms[0]);
        let s = (2.0 * m).sqrt();
        let base = p / 2.0 + m;
        let t = q / (2.0 * s);
        let first = solve_quadratic(s, base - t);
        let second = solve_quadratic(-s, base + t);
        [first[0], first[1], second[0], second[1]]
    };
    let mut roots = [C64::new(0.0, 0.0); 4];
    for (root, y) in roots.iter_mut().zip(ys) {
        let x = y - shift;
        let (px, dpx) = eval_monic_quartic(c, x);
        let mut best = x;
        if dpx.norm() > 0.0 {
            let candidate = x - px / dpx;
            if eval_monic_quartic(c, candidate).0.norm() < px.norm() {
                best = candidate;
            }
        }
        *root = best;
    }
    roots
}
