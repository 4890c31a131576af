//! Camera trajectories around a bounded object.
//!
//! All kinds keep the eye at least `MIN_DISTANCE_FACTOR` bounding radii from
//! the sphere center and always look at the center.

use crate::error::{Error, Result};
use crate::math::Vec3;
use crate::mesh::BoundingSphere;
use crate::render::camera::{CameraPose, Intrinsics};
use serde::{Deserialize, Serialize};

/// Closest approach allowed, in multiples of the bounding radius.
pub const MIN_DISTANCE_FACTOR: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryKind {
    Orbital,
    Arc,
    ZoomIn,
    ZoomOut,
}

impl TrajectoryKind {
    pub const ALL: [TrajectoryKind; 4] = [
        TrajectoryKind::Orbital,
        TrajectoryKind::Arc,
        TrajectoryKind::ZoomIn,
        TrajectoryKind::ZoomOut,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TrajectoryKind::Orbital => "orbital",
            TrajectoryKind::Arc => "arc",
            TrajectoryKind::ZoomIn => "zoom_in",
            TrajectoryKind::ZoomOut => "zoom_out",
        }
    }
}

impl std::str::FromStr for TrajectoryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orbital" => Ok(TrajectoryKind::Orbital),
            "arc" => Ok(TrajectoryKind::Arc),
            "zoom_in" | "zoom-in" => Ok(TrajectoryKind::ZoomIn),
            "zoom_out" | "zoom-out" => Ok(TrajectoryKind::ZoomOut),
            other => Err(Error::InvalidConfig(format!(
                "unknown trajectory kind {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub kind: TrajectoryKind,
    pub num_frames: usize,
    /// Eye distance in multiples of the bounding radius; must be >= 1.5.
    pub base_distance: f64,
    /// Azimuth swept by orbital/arc kinds, radians.
    pub angular_span: f64,
    /// Fixed elevation for orbital/zoom; arc sweeps -elevation..+elevation.
    pub elevation: f64,
    /// Final/initial distance ratio for zoom kinds; in (0, 1] for zoom-in,
    /// >= 1 for zoom-out.
    pub zoom_ratio: f64,
    /// Azimuth of frame 0 (and of the fixed zoom ray), radians.
    pub start_azimuth: f64,
}

impl Trajectory {
    pub fn new(kind: TrajectoryKind, num_frames: usize) -> Self {
        Trajectory {
            kind,
            num_frames,
            base_distance: 2.5,
            angular_span: std::f64::consts::TAU,
            elevation: 0.0,
            zoom_ratio: match kind {
                TrajectoryKind::ZoomIn => 0.75,
                _ => 1.25,
            },
            start_azimuth: 0.0,
        }
    }

    fn validate(&self, sphere: &BoundingSphere) -> Result<()> {
        if self.num_frames == 0 {
            return Err(Error::InvalidConfig("trajectory needs >= 1 frame".into()));
        }
        if sphere.radius <= 0.0 {
            return Err(Error::domain("bounding radius must be positive"));
        }
        if self.base_distance < MIN_DISTANCE_FACTOR {
            return Err(Error::InvalidConfig(format!(
                "base_distance {} < {MIN_DISTANCE_FACTOR}",
                self.base_distance
            )));
        }
        if self.elevation.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::InvalidConfig(
                "elevation magnitude must stay below pi/2".into(),
            ));
        }
        match self.kind {
            TrajectoryKind::ZoomIn => {
                if !(self.zoom_ratio > 0.0 && self.zoom_ratio <= 1.0) {
                    return Err(Error::InvalidConfig(
                        "zoom-in ratio must lie in (0, 1]".into(),
                    ));
                }
                if self.zoom_ratio * self.base_distance < MIN_DISTANCE_FACTOR * (1.0 - 1e-9) {
                    return Err(Error::InvalidConfig(
                        "camera would enter the bounding sphere at the end of the zoom".into(),
                    ));
                }
            }
            TrajectoryKind::ZoomOut => {
                if self.zoom_ratio < 1.0 {
                    return Err(Error::InvalidConfig("zoom-out ratio must be >= 1".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn direction(azimuth: f64, elevation: f64) -> Vec3 {
    let (se, ce) = elevation.sin_cos();
    let (sa, ca) = azimuth.sin_cos();
    Vec3::new(ce * ca, se, ce * sa)
}

/// Camera poses along a trajectory: the eye circles, arcs, or zooms around
/// `sphere.center` and every pose looks at the center.
///
/// Azimuth steps by `span / num_frames` (a full-turn orbit does not repeat
/// its first frame); elevation and zoom sweeps are endpoint-inclusive.
pub fn generate_trajectory(
    traj: &Trajectory,
    sphere: &BoundingSphere,
    intr: &Intrinsics,
) -> Result<Vec<CameraPose>> {
    traj.validate(sphere)?;
    let n = traj.num_frames;
    let up = Vec3::new(0.0, 1.0, 0.0);
    let mut poses = Vec::with_capacity(n);
    for i in 0..n {
        let cyclic = i as f64 / n as f64;
        let inclusive = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
        let (azimuth, elevation, dist_factor) = match traj.kind {
            TrajectoryKind::Orbital => (
                traj.start_azimuth + traj.angular_span * cyclic,
                traj.elevation,
                traj.base_distance,
            ),
            TrajectoryKind::Arc => (
                traj.start_azimuth + traj.angular_span * cyclic,
                -traj.elevation + 2.0 * traj.elevation * inclusive,
                traj.base_distance,
            ),
            TrajectoryKind::ZoomIn | TrajectoryKind::ZoomOut => {
                let end = traj.zoom_ratio * traj.base_distance;
                (
                    traj.start_azimuth,
                    traj.elevation,
                    traj.base_distance + (end - traj.base_distance) * inclusive,
                )
            }
        };
        let eye = sphere
            .center
            .add(direction(azimuth, elevation).scale(dist_factor * sphere.radius));
        poses.push(CameraPose {
            eye,
            look_at: sphere.center,
            up,
            focal: intr.focal,
            image_width: intr.image_width,
            image_height: intr.image_height,
        });
    }
    Ok(poses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn sphere() -> BoundingSphere {
        BoundingSphere {
            center: Vec3::new(1.0, 2.0, 3.0),
            radius: 2.0,
        }
    }

    fn intr() -> Intrinsics {
        Intrinsics::new(64, 64)
    }

    #[test]
    fn orbital_four_frames_full_turn() {
        let mut traj = Trajectory::new(TrajectoryKind::Orbital, 4);
        traj.angular_span = TAU;
        traj.base_distance = 3.0;
        let poses = generate_trajectory(&traj, &sphere(), &intr()).unwrap();
        let d = 3.0 * 2.0;
        let expected_azimuths = [0.0, PI / 2.0, PI, 3.0 * PI / 2.0];
        for (pose, az) in poses.iter().zip(expected_azimuths) {
            let rel = pose.eye.sub(sphere().center);
            assert!((rel.norm() - d).abs() < 1e-9);
            assert!((rel.x - d * az.cos()).abs() < 1e-9);
            assert!((rel.z - d * az.sin()).abs() < 1e-9);
            assert_eq!(pose.look_at, sphere().center);
        }
    }

    #[test]
    fn zoom_in_endpoints() {
        let mut traj = Trajectory::new(TrajectoryKind::ZoomIn, 2);
        traj.base_distance = 3.0;
        traj.zoom_ratio = 0.75;
        let poses = generate_trajectory(&traj, &sphere(), &intr()).unwrap();
        let d0 = poses[0].eye.distance(sphere().center);
        let d1 = poses[1].eye.distance(sphere().center);
        assert!((d0 - 3.0 * 2.0).abs() < 1e-9);
        assert!((d1 - 0.75 * 3.0 * 2.0).abs() < 1e-9);
    }

    #[test]
    fn zero_frames_is_rejected() {
        let traj = Trajectory::new(TrajectoryKind::Orbital, 0);
        assert!(generate_trajectory(&traj, &sphere(), &intr()).is_err());
    }

    #[test]
    fn zoom_into_sphere_is_rejected() {
        let mut traj = Trajectory::new(TrajectoryKind::ZoomIn, 5);
        traj.base_distance = 2.0;
        traj.zoom_ratio = 0.5; // would end at 1.0 radii
        assert!(generate_trajectory(&traj, &sphere(), &intr()).is_err());
    }

    #[test]
    fn too_close_base_distance_is_rejected() {
        let mut traj = Trajectory::new(TrajectoryKind::Orbital, 5);
        traj.base_distance = 1.2;
        assert!(generate_trajectory(&traj, &sphere(), &intr()).is_err());
    }

    #[test]
    fn arc_sweeps_elevation_inclusively() {
        let mut traj = Trajectory::new(TrajectoryKind::Arc, 3);
        traj.elevation = 0.4;
        traj.angular_span = PI;
        let poses = generate_trajectory(&traj, &sphere(), &intr()).unwrap();
        let elev_of = |p: &CameraPose| {
            let rel = p.eye.sub(sphere().center);
            (rel.y / rel.norm()).asin()
        };
        assert!((elev_of(&poses[0]) + 0.4).abs() < 1e-9);
        assert!((elev_of(&poses[1])).abs() < 1e-9);
        assert!((elev_of(&poses[2]) - 0.4).abs() < 1e-9);
    }
}
