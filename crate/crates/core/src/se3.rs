//! Rigid transforms on SE(3).
//!
//! A [`RigidTransform`] is a rotation matrix plus a translation in meters.
//! Rotations are kept orthonormal: constructors validate, and composition
//! re-orthonormalizes when accumulated drift exceeds `ORTHO_TOL`.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Allowed deviation from orthonormality before a rotation is repaired.
pub const ORTHO_TOL: f64 = 1e-9;

/// A rigid-body transform: `p ↦ R·p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl Default for RigidTransform {
    fn default() -> Self {
        Self::identity()
    }
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    /// Builds a transform from parts, checking the rotation invariants
    /// (orthonormal and proper within [`ORTHO_TOL`]).
    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self> {
        let t = Self {
            rotation,
            translation,
        };
        if !t.rotation_valid(ORTHO_TOL) {
            return Err(Error::invalid(
                "rotation matrix is not orthonormal with determinant +1",
            ));
        }
        Ok(t)
    }

    /// Like [`RigidTransform::new`] but repairs small drift instead of rejecting it.
    pub fn new_renormalized(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self> {
        let mut t = Self {
            rotation,
            translation,
        };
        if !t.rotation_valid(1e-6) {
            return Err(Error::invalid(
                "rotation matrix is too far from orthonormal to repair",
            ));
        }
        if !t.rotation_valid(ORTHO_TOL) {
            t.rotation = orthonormalize(&t.rotation);
        }
        Ok(t)
    }

    pub fn from_translation(translation: Vector3<f64>) -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation,
        }
    }

    /// Rotation about an arbitrary axis (need not be normalized) by `angle` radians.
    pub fn from_axis_angle(axis: Vector3<f64>, angle: f64) -> Self {
        let axis = nalgebra::Unit::new_normalize(axis);
        Self {
            rotation: nalgebra::Rotation3::from_axis_angle(&axis, angle).into_inner(),
            translation: Vector3::zeros(),
        }
    }

    pub fn rot_x(angle: f64) -> Self {
        Self::from_axis_angle(Vector3::x(), angle)
    }

    pub fn rot_y(angle: f64) -> Self {
        Self::from_axis_angle(Vector3::y(), angle)
    }

    pub fn rot_z(angle: f64) -> Self {
        Self::from_axis_angle(Vector3::z(), angle)
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        let mut rotation = self.rotation * other.rotation;
        if rotation_drift(&rotation) > ORTHO_TOL {
            rotation = orthonormalize(&rotation);
        }
        RigidTransform {
            rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let rt = self.rotation.transpose();
        RigidTransform {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn apply(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    /// Rotates a direction vector without translating it.
    pub fn apply_dir(&self, d: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * d
    }

    /// Angle (radians) of the relative rotation between two transforms.
    pub fn rotation_angle_to(&self, other: &RigidTransform) -> f64 {
        let rel = self.rotation.transpose() * other.rotation;
        let cos = ((rel.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
        cos.acos()
    }

    pub fn translation_distance_to(&self, other: &RigidTransform) -> f64 {
        (self.translation - other.translation).norm()
    }

    fn rotation_valid(&self, tol: f64) -> bool {
        rotation_drift(&self.rotation) <= tol && (self.rotation.determinant() - 1.0).abs() <= tol
    }

    /// Row-major 4×4 homogeneous matrix, bottom row `0 0 0 1`.
    pub fn to_matrix_rows(&self) -> [f64; 16] {
        let r = &self.rotation;
        let t = &self.translation;
        [
            r[(0, 0)],
            r[(0, 1)],
            r[(0, 2)],
            t.x,
            r[(1, 0)],
            r[(1, 1)],
            r[(1, 2)],
            t.y,
            r[(2, 0)],
            r[(2, 1)],
            r[(2, 2)],
            t.z,
            0.0,
            0.0,
            0.0,
            1.0,
        ]
    }

    /// Parses the row-major layout produced by [`RigidTransform::to_matrix_rows`].
    pub fn from_matrix_rows(m: &[f64; 16]) -> Result<Self> {
        if m[12] != 0.0 || m[13] != 0.0 || m[14] != 0.0 || m[15] != 1.0 {
            return Err(Error::invalid("bottom row of a pose matrix must be 0 0 0 1"));
        }
        let rotation = Matrix3::new(m[0], m[1], m[2], m[4], m[5], m[6], m[8], m[9], m[10]);
        Self::new_renormalized(rotation, Vector3::new(m[3], m[7], m[11]))
    }
}

fn rotation_drift(r: &Matrix3<f64>) -> f64 {
    let gram = r * r.transpose() - Matrix3::identity();
    gram.abs().max()
}

/// Nearest rotation matrix in the Frobenius sense, via SVD.
fn orthonormalize(r: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = r.svd(true, true);
    let u = svd.u.expect("svd of 3x3 always yields u");
    let vt = svd.v_t.expect("svd of 3x3 always yields v_t");
    let mut rot = u * vt;
    if rot.determinant() < 0.0 {
        // Flip the weakest singular direction to stay in SO(3).
        let mut u = u;
        u.column_mut(2).neg_mut();
        rot = u * vt;
    }
    rot
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn random_transform(rng: &mut impl rand::Rng) -> RigidTransform {
        let axis = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let angle = rng.random_range(-PI..PI);
        let mut t = RigidTransform::from_axis_angle(axis + Vector3::new(0.01, 0.0, 0.0), angle);
        t.translation = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        t
    }

    #[test]
    fn identity_is_neutral() {
        let t = RigidTransform::rot_z(0.3).compose(&RigidTransform::from_translation(
            Vector3::new(0.1, -0.2, 0.5),
        ));
        let i = RigidTransform::identity();
        let left = i.compose(&t);
        let right = t.compose(&i);
        assert_relative_eq!(left.rotation, t.rotation, epsilon = 1e-15);
        assert_relative_eq!(right.translation, t.translation, epsilon = 1e-15);
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let t = RigidTransform::rot_y(1.1).compose(&RigidTransform::from_translation(
            Vector3::new(0.4, 0.0, -0.7),
        ));
        let id = t.compose(&t.inverse());
        assert_relative_eq!(id.rotation, Matrix3::identity(), epsilon = 1e-12);
        assert!(id.translation.norm() < 1e-12);
    }

    #[test]
    fn compose_matches_direct_matrix_product() {
        // Oracle: direct matrix product of the two rotations.
        let a = RigidTransform::rot_z(FRAC_PI_2);
        let b = RigidTransform::rot_z(FRAC_PI_2);
        let c = a.compose(&b);
        let expected = RigidTransform::rot_z(PI);
        assert_relative_eq!(c.rotation, expected.rotation, epsilon = 1e-12);
    }

    #[test]
    fn compose_is_associative() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let (a, b, c) = (
                random_transform(&mut rng),
                random_transform(&mut rng),
                random_transform(&mut rng),
            );
            let left = a.compose(&b).compose(&c);
            let right = a.compose(&b.compose(&c));
            assert_relative_eq!(left.rotation, right.rotation, epsilon = 1e-9);
            assert_relative_eq!(left.translation, right.translation, epsilon = 1e-9);
        }
    }

    #[test]
    fn long_compose_chain_stays_orthonormal() {
        let step = RigidTransform::from_axis_angle(Vector3::new(1.0, 2.0, 3.0), 0.01);
        let mut acc = RigidTransform::identity();
        for _ in 0..100_000 {
            acc = acc.compose(&step);
        }
        assert!(rotation_drift(&acc.rotation) <= ORTHO_TOL * 10.0);
        assert_relative_eq!(acc.rotation.determinant(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn matrix_round_trip_is_exact() {
        let t = RigidTransform::rot_x(0.37).compose(&RigidTransform::from_translation(
            Vector3::new(1.0, 2.0, 3.0),
        ));
        let rows = t.to_matrix_rows();
        let back = RigidTransform::from_matrix_rows(&rows).unwrap();
        assert_eq!(t.rotation, back.rotation);
        assert_eq!(t.translation, back.translation);
    }

    #[test]
    fn new_rejects_sheared_matrix() {
        let mut m = Matrix3::identity();
        m[(0, 1)] = 0.01;
        assert!(RigidTransform::new(m, Vector3::zeros()).is_err());
    }
}
