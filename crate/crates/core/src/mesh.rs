//! Triangle mesh ingestion.
//!
//! Parses a text subset of the Wavefront format: `v x y z`, `vt u v`, and
//! `f` with 1-based `a`, `a/b`, `a/b/c`, or `a//c` vertex tokens (normal
//! indices are ignored; faces are shaded flat). Polygons fan-triangulate.
//! Unknown directives are skipped and counted.

use crate::error::{Error, Result};
use crate::frame::RgbFrame;
use crate::math::{Vec2, Vec3};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangle {
    /// Indices into the vertex array.
    pub vertices: [usize; 3],
    /// Indices into the UV array; all present or all absent per face.
    pub uvs: Option<[usize; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingSphere {
    pub center: Vec3,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Vec3>,
    uvs: Vec<Vec2>,
    triangles: Vec<Triangle>,
    texture: Option<RgbFrame>,
    bounding_sphere: BoundingSphere,
}

/// Parse result: the mesh plus a tally of skipped directives.
#[derive(Debug)]
pub struct ParsedMesh {
    pub mesh: Mesh,
    pub ignored_directives: BTreeMap<String, usize>,
}

impl ParsedMesh {
    pub fn warning_count(&self) -> usize {
        self.ignored_directives.values().sum()
    }
}

impl Mesh {
    /// Validates indices, distinctness, and component finiteness, and
    /// computes the bounding sphere.
    pub fn build(vertices: Vec<Vec3>, uvs: Vec<Vec2>, triangles: Vec<Triangle>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::domain("mesh has zero triangles"));
        }
        if let Some(v) = vertices.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite vertex {v:?}")));
        }
        if let Some(uv) = uvs.iter().find(|uv| !uv.is_finite()) {
            return Err(Error::domain(format!("non-finite uv {uv:?}")));
        }
        for (i, t) in triangles.iter().enumerate() {
            for &vi in &t.vertices {
                if vi >= vertices.len() {
                    return Err(Error::domain(format!(
                        "triangle {i}: vertex index {} out of range (have {})",
                        vi + 1,
                        vertices.len()
                    )));
                }
            }
            let [a, b, c] = t.vertices;
            if a == b || b == c || a == c {
                return Err(Error::domain(format!(
                    "triangle {i}: repeated vertex index"
                )));
            }
            if let Some(uv) = t.uvs {
                for &ti in &uv {
                    if ti >= uvs.len() {
                        return Err(Error::domain(format!(
                            "triangle {i}: uv index {} out of range (have {})",
                            ti + 1,
                            uvs.len()
                        )));
                    }
                }
            }
        }
        let bounding_sphere = compute_bounding_sphere(&vertices)?;
        Ok(Mesh {
            vertices,
            uvs,
            triangles,
            texture: None,
            bounding_sphere,
        })
    }

    pub fn with_texture(mut self, texture: RgbFrame) -> Self {
        self.texture = Some(texture);
        self
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn uvs(&self) -> &[Vec2] {
        &self.uvs
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn texture(&self) -> Option<&RgbFrame> {
        self.texture.as_ref()
    }

    pub fn bounding_sphere(&self) -> BoundingSphere {
        self.bounding_sphere
    }

    pub fn has_uvs(&self) -> bool {
        self.triangles.iter().any(|t| t.uvs.is_some())
    }

    /// A mesh whose faces carry UVs must also carry a texture to be
    /// renderable in textured mode.
    pub fn validate_texturing(&self) -> Result<()> {
        if self.has_uvs() && self.texture.is_none() {
            return Err(Error::domain(
                "mesh has uv coordinates but no texture image",
            ));
        }
        Ok(())
    }
}

/// Centroid center, max-distance radius. Radius 0 only when all vertices
/// coincide; callers that need a usable object scale must reject that.
pub fn compute_bounding_sphere(vertices: &[Vec3]) -> Result<BoundingSphere> {
    if vertices.is_empty() {
        return Err(Error::domain("cannot bound an empty vertex list"));
    }
    let n = vertices.len() as f64;
    let mut center = Vec3::ZERO;
    for v in vertices {
        center = center.add(*v);
    }
    center = center.scale(1.0 / n);
    let radius = vertices
        .iter()
        .map(|v| v.distance(center))
        .fold(0.0f64, f64::max);
    Ok(BoundingSphere { center, radius })
}

/// Parse mesh text from a reader.
pub fn parse_mesh<R: BufRead>(reader: R) -> Result<ParsedMesh> {
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut uvs: Vec<Vec2> = Vec::new();
    let mut faces: Vec<(usize, Vec<FaceToken>)> = Vec::new();
    let mut ignored: BTreeMap<String, usize> = BTreeMap::new();

    for (line_no, line) in reader.lines().enumerate() {
        let line_no = line_no + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => &line[..],
        };
        let mut tokens = line.split_whitespace();
        let Some(directive) = tokens.next() else {
            continue;
        };
        let rest: Vec<&str> = tokens.collect();
        match directive {
            "v" => {
                let c = parse_floats::<3>(&rest, line_no, "v")?;
                vertices.push(Vec3::new(c[0], c[1], c[2]));
            }
            "vt" => {
                let c = parse_floats::<2>(&rest, line_no, "vt")?;
                uvs.push(Vec2::new(c[0], c[1]));
            }
            "f" => {
                if rest.len() < 3 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("face needs at least 3 vertices, got {}", rest.len()),
                    });
                }
                let parsed: Result<Vec<FaceToken>> =
                    rest.iter().map(|t| parse_face_token(t, line_no)).collect();
                faces.push((line_no, parsed?));
            }
            other => {
                *ignored.entry(other.to_string()).or_insert(0) += 1;
            }
        }
    }

    let mut triangles = Vec::new();
    for (line_no, tokens) in faces {
        let with_uv = tokens.iter().filter(|t| t.uv.is_some()).count();
        if with_uv != 0 && with_uv != tokens.len() {
            return Err(Error::Parse {
                line: line_no,
                msg: "face mixes uv-bearing and uv-free vertices".into(),
            });
        }
        // Fan triangulation: (0, i, i+1) for i in 1..n-1.
        for i in 1..tokens.len() - 1 {
            let corners = [&tokens[0], &tokens[i], &tokens[i + 1]];
            let vertices = [corners[0].vertex, corners[1].vertex, corners[2].vertex];
            let uvs = if with_uv == tokens.len() {
                Some([
                    corners[0].uv.unwrap(),
                    corners[1].uv.unwrap(),
                    corners[2].uv.unwrap(),
                ])
            } else {
                None
            };
            triangles.push(Triangle { vertices, uvs });
        }
    }

    let mesh = Mesh::build(vertices, uvs, triangles)?;
    Ok(ParsedMesh {
        mesh,
        ignored_directives: ignored,
    })
}

/// Parse mesh text from a string.
pub fn parse_mesh_str(text: &str) -> Result<ParsedMesh> {
    parse_mesh(text.as_bytes())
}

/// Serialize a mesh back to the text format. Floats use the shortest
/// round-trip representation, so `parse(write(mesh)) == mesh`.
pub fn write_mesh(mesh: &Mesh) -> String {
    let mut out = String::new();
    for v in mesh.vertices() {
        writeln!(out, "v {} {} {}", v.x, v.y, v.z).unwrap();
    }
    for uv in mesh.uvs() {
        writeln!(out, "vt {} {}", uv.u, uv.v).unwrap();
    }
    for t in mesh.triangles() {
        match t.uvs {
            Some(uv) => writeln!(
                out,
                "f {}/{} {}/{} {}/{}",
                t.vertices[0] + 1,
                uv[0] + 1,
                t.vertices[1] + 1,
                uv[1] + 1,
                t.vertices[2] + 1,
                uv[2] + 1
            )
            .unwrap(),
            None => writeln!(
                out,
                "f {} {} {}",
                t.vertices[0] + 1,
                t.vertices[1] + 1,
                t.vertices[2] + 1
            )
            .unwrap(),
        }
    }
    out
}

struct FaceToken {
    vertex: usize,
    uv: Option<usize>,
}

fn parse_face_token(token: &str, line: usize) -> Result<FaceToken> {
    let mut parts = token.split('/');
    let v = parts.next().unwrap_or("");
    let vt = parts.next();
    // A third component is a normal index; normals are recomputed per face.
    let vertex = parse_index(v, line, token)?;
    let uv = match vt {
        None | Some("") => None,
        Some(s) => Some(parse_index(s, line, token)?),
    };
    Ok(FaceToken { vertex, uv })
}

fn parse_index(s: &str, line: usize, token: &str) -> Result<usize> {
    let idx: i64 = s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("malformed index in face token {token:?}"),
    })?;
    if idx < 1 {
        return Err(Error::Parse {
            line,
            msg: format!("index must be positive in face token {token:?}"),
        });
    }
    Ok((idx - 1) as usize)
}

fn parse_floats<const N: usize>(tokens: &[&str], line: usize, directive: &str) -> Result<[f64; N]> {
    if tokens.len() < N {
        return Err(Error::Parse {
            line,
            msg: format!("{directive} needs {N} components, got {}", tokens.len()),
        });
    }
    let mut out = [0.0; N];
    for (i, t) in tokens[..N].iter().enumerate() {
        out[i] = t.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("malformed number {t:?}"),
        })?;
    }
    Ok(out)
}
