//! Pinhole camera with a look-at orientation.

use crate::error::{Error, Result};
use crate::math::Vec3;
use serde::{Deserialize, Serialize};

/// Camera placement plus fixed intrinsics for one frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraPose {
    pub eye: Vec3,
    pub look_at: Vec3,
    pub up: Vec3,
    /// Focal length in pixels, shared by x and y.
    pub focal: f64,
    pub image_width: usize,
    pub image_height: usize,
}

/// Fixed intrinsics shared by every pose of a clip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intrinsics {
    pub image_width: usize,
    pub image_height: usize,
    pub focal: f64,
}

impl Intrinsics {
    /// Default focal length equals the image height.
    pub fn new(image_width: usize, image_height: usize) -> Self {
        Intrinsics {
            image_width,
            image_height,
            focal: image_height as f64,
        }
    }

    pub fn with_focal(mut self, focal: f64) -> Self {
        self.focal = focal;
        self
    }
}

/// Orthonormal camera frame: `right` along +x, `down` along +y (image rows),
/// `forward` along +z into the scene.
#[derive(Debug, Clone, Copy)]
pub struct CameraBasis {
    pub right: Vec3,
    pub down: Vec3,
    pub forward: Vec3,
}

impl CameraPose {
    pub fn basis(&self) -> Result<CameraBasis> {
        let view = self.look_at.sub(self.eye);
        if view.norm() < 1e-12 {
            return Err(Error::InvalidConfig("camera eye equals look_at".into()));
        }
        let forward = view.normalized();
        let right = forward.cross(self.up);
        if right.norm() < 1e-9 {
            return Err(Error::InvalidConfig(
                "camera up is parallel to the view direction".into(),
            ));
        }
        let right = right.normalized();
        let down = forward.cross(right).normalized();
        Ok(CameraBasis {
            right,
            down,
            forward,
        })
    }

    /// World point to camera space (x right, y down, z forward).
    pub fn to_camera(&self, basis: &CameraBasis, p: Vec3) -> Vec3 {
        let d = p.sub(self.eye);
        Vec3::new(basis.right.dot(d), basis.down.dot(d), basis.forward.dot(d))
    }

    /// Camera-space point to pixel coordinates. Callers must ensure `z > 0`.
    pub fn project_camera_point(&self, c: Vec3) -> (f64, f64) {
        let u = self.image_width as f64 / 2.0 + self.focal * c.x / c.z;
        let v = self.image_height as f64 / 2.0 + self.focal * c.y / c.z;
        (u, v)
    }

    /// World point straight to pixel coordinates plus camera depth.
    pub fn project(&self, p: Vec3) -> Result<(f64, f64, f64)> {
        let basis = self.basis()?;
        let c = self.to_camera(&basis, p);
        if c.z <= 0.0 {
            return Err(Error::domain("point is behind the camera"));
        }
        let (u, v) = self.project_camera_point(c);
        Ok((u, v, c.z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pose() -> CameraPose {
        CameraPose {
            eye: Vec3::new(0.0, 0.0, -5.0),
            look_at: Vec3::ZERO,
            up: Vec3::new(0.0, 1.0, 0.0),
            focal: 64.0,
            image_width: 64,
            image_height: 64,
        }
    }

    #[test]
    fn center_projects_to_image_center() {
        let (u, v, z) = pose().project(Vec3::ZERO).unwrap();
        assert!((u - 32.0).abs() < 1e-12);
        assert!((v - 32.0).abs() < 1e-12);
        assert!((z - 5.0).abs() < 1e-12);
    }

    #[test]
    fn image_y_grows_downward() {
        // A point above the look-at target must land above the image center.
        let (_, v, _) = pose().project(Vec3::new(0.0, 1.0, 0.0)).unwrap();
        assert!(v < 32.0);
    }

    #[test]
    fn degenerate_basis_is_rejected() {
        let mut p = pose();
        p.up = Vec3::new(0.0, 0.0, 1.0); // parallel to view direction
        assert!(p.basis().is_err());
        p.up = Vec3::new(0.0, 1.0, 0.0);
        p.look_at = p.eye;
        assert!(p.basis().is_err());
    }

    #[test]
    fn behind_camera_is_rejected() {
        assert!(pose().project(Vec3::new(0.0, 0.0, -10.0)).is_err());
    }
}
