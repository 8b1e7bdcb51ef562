//! Small fixed-size linear algebra helpers on top of nalgebra.

pub type Vec2 = nalgebra::Vector2<f64>;
pub type Mat2 = nalgebra::Matrix2<f64>;

pub fn vec2(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

/// Counter-clockwise rotation by 90 degrees: (x, y) -> (-y, x).
pub fn rot90(v: Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

/// Rotation matrix for angle `a` (counter-clockwise).
pub fn rotation(a: f64) -> Mat2 {
    let (s, c) = a.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// Scalar cross product a x b = a1*b2 - a2*b1.
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Outer product a b^T.
pub fn outer(a: Vec2, b: Vec2) -> Mat2 {
    Mat2::new(a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y)
}

/// Frobenius inner product A : B.
pub fn frob(a: &Mat2, b: &Mat2) -> f64 {
    a.m11 * b.m11 + a.m12 * b.m12 + a.m21 * b.m21 + a.m22 * b.m22
}

/// Wrap an angle into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a % std::f64::consts::TAU;
    if r <= -std::f64::consts::PI {
        r += std::f64::consts::TAU;
    } else if r > std::f64::consts::PI {
        r -= std::f64::consts::TAU;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rot90_is_ccw_quarter_turn() {
        let v = vec2(1.0, 0.0);
        assert_relative_eq!(rot90(v), vec2(0.0, 1.0));
        assert_relative_eq!(rot90(rot90(v)), -v);
    }

    #[test]
    fn rotation_matches_rot90_at_quarter_turn() {
        let r = rotation(std::f64::consts::FRAC_PI_2);
        let v = vec2(0.3, -0.7);
        assert_relative_eq!(r * v, rot90(v), epsilon = 1e-15);
    }

    #[test]
    fn wrap_angle_stays_in_band() {
        for k in -8..8 {
            let a = 0.4 + k as f64 * std::f64::consts::TAU;
            assert_relative_eq!(wrap_angle(a), 0.4, epsilon = 1e-12);
        }
        assert_relative_eq!(wrap_angle(std::f64::consts::PI + 0.1), -std::f64::consts::PI + 0.1, epsilon = 1e-12);
    }
}
