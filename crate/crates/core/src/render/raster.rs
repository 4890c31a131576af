//! Software rasterizer: pinhole projection, z-buffer hidden-surface removal,
//! flat Lambertian shading under a headlight.
//!
//! The light sits exactly at the camera eye with no distance falloff, so a
//! covered pixel shades to `albedo * light_intensity * max(0, n.l)` where `n`
//! is the face normal oriented toward the camera and `l` points from the
//! surface to the eye. No shadows, no ambient term, no anti-aliasing;
//! back-face culling is off and hidden surfaces are resolved by depth alone.

use crate::error::Result;
use crate::frame::{GrayFrame, MaskFrame, RgbFrame};
use crate::math::Vec3;
use crate::mesh::Mesh;
use crate::render::camera::CameraPose;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaterialMode {
    /// Albedo from the mesh texture (uv-bearing faces) or the uniform gray.
    Textured,
    /// Uniform gray albedo everywhere; texture and uvs are ignored.
    UntexturedGray,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderConfig {
    pub material_mode: MaterialMode,
    /// Uniform albedo of the texture-free pass, in (0, 1].
    pub gray_albedo: f32,
    pub light_intensity: f32,
    /// Total object rotation swept linearly across the clip, radians.
    pub pose_rotation: f64,
    /// Rotation axis; None means the pair renderer samples one from its seed.
    pub pose_axis: Option<Vec3>,
    /// Total object translation swept linearly across the clip, world units.
    pub pose_translation: Vec3,
    pub background_color: [f32; 3],
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            material_mode: MaterialMode::Textured,
            gray_albedo: 0.5,
            light_intensity: 1.0,
            pose_rotation: 0.0,
            pose_axis: None,
            pose_translation: Vec3::ZERO,
            background_color: [0.0, 0.0, 0.0],
        }
    }
}

/// Rigid transform applied to the object for one frame: rotate about `pivot`,
/// then translate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectPose {
    pub pivot: Vec3,
    pub axis: Vec3,
    pub angle: f64,
    pub translation: Vec3,
}

impl ObjectPose {
    pub fn identity() -> Self {
        ObjectPose {
            pivot: Vec3::ZERO,
            axis: Vec3::new(0.0, 1.0, 0.0),
            angle: 0.0,
            translation: Vec3::ZERO,
        }
    }

    pub fn apply(&self, p: Vec3) -> Vec3 {
        self.pivot
            .add(p.sub(self.pivot).rotate_about(self.axis, self.angle))
            .add(self.translation)
    }
}

/// One rendered frame: color, coverage (pixels where depth was written), and
/// camera-space depth (infinity where empty).
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedFrame {
    pub color: RgbFrame,
    pub coverage: MaskFrame,
    pub depth: GrayFrame,
}

/// Render a mesh in its rest pose.
pub fn render_frame(mesh: &Mesh, pose: &CameraPose, cfg: &RenderConfig) -> Result<RenderedFrame> {
    render_frame_posed(mesh, pose, cfg, &ObjectPose::identity())
}

/// Render a mesh under a per-frame object transform.
pub fn render_frame_posed(
    mesh: &Mesh,
    pose: &CameraPose,
    cfg: &RenderConfig,
    object: &ObjectPose,
) -> Result<RenderedFrame> {
    let basis = pose.basis()?;
    let (w, h) = (pose.image_width, pose.image_height);
    let mut color = RgbFrame::new(w, h);
    for y in 0..h {
        for x in 0..w {
            color.set(x, y, cfg.background_color);
        }
    }
    let mut coverage = MaskFrame::new(w, h);
    let mut depth = GrayFrame::filled(w, h, f32::INFINITY);

    // Camera-space vertices, transformed once per frame.
    let cam_verts: Vec<Vec3> = mesh
        .vertices()
        .iter()
        .map(|&v| pose.to_camera(&basis, object.apply(v)))
        .collect();

    let sample_texture = cfg.material_mode == MaterialMode::Textured && mesh.texture().is_some();

    for tri in mesh.triangles() {
        let v = [
            cam_verts[tri.vertices[0]],
            cam_verts[tri.vertices[1]],
            cam_verts[tri.vertices[2]],
        ];
        // Triangles reaching behind the camera are skipped, not clipped;
        // trajectory validation keeps the object fully in front.
        if v.iter().any(|p| p.z <= 1e-9) {
            continue;
        }
        // Geometric face normal in camera space, oriented toward the camera
        // (the camera sits at the origin, so "toward" means n.v0 < 0).
        let mut normal = v[1].sub(v[0]).cross(v[2].sub(v[0]));
        if normal.norm() < 1e-18 {
            continue;
        }
        normal = normal.normalized();
        if normal.dot(v[0]) > 0.0 {
            normal = normal.scale(-1.0);
        }

        let screen: Vec<(f64, f64)> = v.iter().map(|&p| pose.project_camera_point(p)).collect();
        let area = edge(screen[0], screen[1], screen[2]);
        if area.abs() < 1e-12 {
            continue;
        }

        let min_x = screen.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let max_x = screen.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let min_y = screen.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let max_y = screen.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let x0 = (min_x - 0.5).floor().max(0.0) as usize;
        let x1 = (max_x - 0.5).ceil().min((w - 1) as f64) as usize;
        let y0 = (min_y - 0.5).floor().max(0.0) as usize;
        let y1 = (max_y - 0.5).ceil().min((h - 1) as f64) as usize;
        if x0 > x1 || y0 > y1 {
            continue;
        }

        let uv = tri.uvs.map(|idx| {
            [
                mesh.uvs()[idx[0]],
                mesh.uvs()[idx[1]],
                mesh.uvs()[idx[2]],
            ]
        });
        let inv_z = [1.0 / v[0].z, 1.0 / v[1].z, 1.0 / v[2].z];

        for py in y0..=y1 {
            for px in x0..=x1 {
                let p = (px as f64 + 0.5, py as f64 + 0.5);
                let w0 = edge(screen[1], screen[2], p) / area;
                let w1 = edge(screen[2], screen[0], p) / area;
                let w2 = edge(screen[0], screen[1], p) / area;
                if w0 < 0.0 || w1 < 0.0 || w2 < 0.0 {
                    continue;
                }
                let lam = [w0, w1, w2];
                let z = 1.0 / (lam[0] * inv_z[0] + lam[1] * inv_z[1] + lam[2] * inv_z[2]);
                let zf = z as f32;
                if zf >= depth.get(px, py) {
                    continue;
                }

                // Perspective-correct surface point; equals the ray hit.
                let mut surf = Vec3::ZERO;
                for k in 0..3 {
                    surf = surf.add(v[k].scale(lam[k] * inv_z[k]));
                }
                surf = surf.scale(z);
                let to_light = surf.scale(-1.0).normalized();
                let lambert = normal.dot(to_light).max(0.0) as f32;

                let albedo = match (sample_texture, uv) {
                    (true, Some(uvs)) => {
                        let mut tu = 0.0;
                        let mut tv = 0.0;
                        for k in 0..3 {
                            tu += lam[k] * inv_z[k] * uvs[k].u;
                            tv += lam[k] * inv_z[k] * uvs[k].v;
                        }
                        tu *= z;
                        tv *= z;
                        sample_texture_rgb(mesh.texture().unwrap(), tu as f32, tv as f32)
                    }
                    _ => [cfg.gray_albedo; 3],
                };

                let shade = |a: f32| (a * cfg.light_intensity * lambert).clamp(0.0, 1.0);
                color.set(px, py, [shade(albedo[0]), shade(albedo[1]), shade(albedo[2])]);
                coverage.set(px, py, 1);
                depth.set(px, py, zf);
            }
        }
    }

    Ok(RenderedFrame {
        color,
        coverage,
        depth,
    })
}

#[inline]
fn edge(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0)
}

/// Bilinear texture fetch with uv in [0,1]^2, v pointing up, clamp-to-edge.
fn sample_texture_rgb(tex: &RgbFrame, u: f32, v: f32) -> [f32; 3] {
    let x = u.clamp(0.0, 1.0) * (tex.width() - 1) as f32;
    let y = (1.0 - v.clamp(0.0, 1.0)) * (tex.height() - 1) as f32;
    tex.sample_bilinear(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::parse_mesh_str;

    fn facing_pose() -> CameraPose {
        CameraPose {
            eye: Vec3::new(0.0, 0.0, -2.0),
            look_at: Vec3::ZERO,
            up: Vec3::new(0.0, 1.0, 0.0),
            focal: 64.0,
            image_width: 64,
            image_height: 64,
        }
    }

    fn gray_cfg() -> RenderConfig {
        RenderConfig {
            material_mode: MaterialMode::UntexturedGray,
            ..RenderConfig::default()
        }
    }

    fn big_triangle() -> Mesh {
        parse_mesh_str("v -1 -1 0\nv 1 -1 0\nv 0 1.5 0\nf 1 2 3")
            .unwrap()
            .mesh
    }

    #[test]
    fn head_on_triangle_shades_near_gray_albedo() {
        let frame = render_frame(&big_triangle(), &facing_pose(), &gray_cfg()).unwrap();
        let covered = frame.coverage.count_ones();
        assert!(covered > 100, "triangle should cover many pixels");
        // At the image center the light direction is exactly the normal.
        let c = frame.color.get(32, 32);
        assert!(frame.coverage.get(32, 32) == 1);
        assert!((c[0] - 0.5).abs() < 1e-3, "{c:?}");
    }

    #[test]
    fn edge_on_triangle_shades_to_zero() {
        // Rotate the triangle so its plane contains the view direction.
        let mesh = parse_mesh_str("v 0 -1 -1\nv 0 -1 1\nv 0 1.5 0\nf 1 2 3")
            .unwrap()
            .mesh;
        let pose = CameraPose {
            eye: Vec3::new(0.0, 0.0, -3.0),
            ..facing_pose()
        };
        let frame = render_frame(&mesh, &pose, &gray_cfg()).unwrap();
        for y in 0..64 {
            for x in 0..64 {
                if frame.coverage.get(x, y) == 1 {
                    let c = frame.color.get(x, y);
                    // n is perpendicular to l only at the exact center line;
                    // elsewhere the Lambert term stays tiny.
                    assert!(c[0] < 0.02, "pixel ({x},{y}) = {c:?}");
                }
            }
        }
    }

    #[test]
    fn empty_pixels_keep_background_and_zero_coverage() {
        let mut cfg = gray_cfg();
        cfg.background_color = [0.25, 0.5, 0.75];
        let frame = render_frame(&big_triangle(), &facing_pose(), &cfg).unwrap();
        let mut saw_empty = false;
        for y in 0..64 {
            for x in 0..64 {
                if frame.coverage.get(x, y) == 0 {
                    saw_empty = true;
                    assert_eq!(frame.color.get(x, y), [0.25, 0.5, 0.75]);
                    assert_eq!(frame.depth.get(x, y), f32::INFINITY);
                }
            }
        }
        assert!(saw_empty);
    }

    #[test]
    fn pixel_values_stay_in_unit_range_with_hot_light() {
        let mut cfg = gray_cfg();
        cfg.light_intensity = 5.0;
        let frame = render_frame(&big_triangle(), &facing_pose(), &cfg).unwrap();
        assert!(frame.color.data().iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn object_pose_moves_the_silhouette() {
        let mesh = big_triangle();
        let rest = render_frame(&mesh, &facing_pose(), &gray_cfg()).unwrap();
        let moved = render_frame_posed(
            &mesh,
            &facing_pose(),
            &gray_cfg(),
            &ObjectPose {
                pivot: Vec3::ZERO,
                axis: Vec3::new(0.0, 1.0, 0.0),
                angle: 0.0,
                translation: Vec3::new(0.4, 0.0, 0.0),
            },
        )
        .unwrap();
        assert_ne!(rest.coverage, moved.coverage);
    }
}
