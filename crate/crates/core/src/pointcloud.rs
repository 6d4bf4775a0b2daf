//! Point clouds and the cloud-level operations shared by the pipeline.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::se3::RigidTransform;

/// An ordered set of 3D points in meters, tagged with the frame they are
/// expressed in ("world", "camera", "bin", "object", ...).
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Vector3<f64>>,
    pub frame: String,
}

impl PointCloud {
    pub fn new(points: Vec<Vector3<f64>>, frame: impl Into<String>) -> Self {
        Self {
            points,
            frame: frame.into(),
        }
    }

    pub fn empty(frame: impl Into<String>) -> Self {
        Self::new(Vec::new(), frame)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// All coordinates finite. Loaders and generators uphold this; call it
    /// when ingesting points from outside the crate.
    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                return Err(Error::invalid(format!("non-finite point at index {i}")));
            }
        }
        Ok(())
    }

    pub fn centroid(&self) -> Option<Vector3<f64>> {
        if self.is_empty() {
            return None;
        }
        let sum: Vector3<f64> = self.points.iter().sum();
        Some(sum / self.points.len() as f64)
    }
}

/// Maps every point through `t`, preserving order. The output cloud keeps
/// the given target frame name.
pub fn transform_points(
    cloud: &PointCloud,
    t: &RigidTransform,
    target_frame: impl Into<String>,
) -> Result<PointCloud> {
    if cloud.is_empty() {
        return Err(Error::EmptyInput("transform_points"));
    }
    Ok(PointCloud {
        points: cloud.points.iter().map(|p| t.apply(p)).collect(),
        frame: target_frame.into(),
    })
}

/// Points within `r` of `center` (inclusive), input order preserved.
pub fn radius_crop(cloud: &PointCloud, center: &Vector3<f64>, r: f64) -> Result<PointCloud> {
    if r <= 0.0 {
        return Err(Error::invalid(format!("crop radius must be > 0, got {r}")));
    }
    let r2 = r * r;
    Ok(PointCloud {
        points: cloud
            .points
            .iter()
            .filter(|p| (*p - center).norm_squared() <= r2)
            .copied()
            .collect(),
        frame: cloud.frame.clone(),
    })
}
