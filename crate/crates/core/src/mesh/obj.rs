//! Minimal Wavefront OBJ subset: `v x y z [w]` and triangular `f i j k`.
//!
//! Blank lines and `#` comments are skipped. Any other statement, any face that
//! is not a triangle, and any index with `/` attributes is rejected.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use super::TriMesh;
use crate::hgeom::HVec4;

#[derive(Debug, Error)]
pub enum ObjError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn err(line: usize, msg: impl Into<String>) -> ObjError {
    ObjError::Parse { line, msg: msg.into() }
}

pub fn parse_obj(text: &str) -> Result<TriMesh, ObjError> {
    let mut mesh = TriMesh::default();
    let mut faces: Vec<(usize, [i64; 3])> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().unwrap_or("");
        let rest: Vec<&str> = tokens.collect();
        match keyword {
            "v" => {
                if rest.len() != 3 && rest.len() != 4 {
                    return Err(err(line_no, "vertex needs 3 or 4 coordinates"));
                }
                let mut c = [0.0, 0.0, 0.0, 1.0];
                for (k, tok) in rest.iter().enumerate() {
                    c[k] = tok
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| err(line_no, format!("bad coordinate {tok:?}")))?;
                }
                mesh.vertices.push(HVec4::from_array(c));
            }
            "f" => {
                if rest.len() != 3 {
                    return Err(err(line_no, "only triangular faces are supported"));
                }
                let mut idx = [0i64; 3];
                for (k, tok) in rest.iter().enumerate() {
                    idx[k] = tok
                        .parse::<i64>()
                        .map_err(|_| err(line_no, format!("bad face index {tok:?}")))?;
                }
                faces.push((line_no, idx));
            }
            other => return Err(err(line_no, format!("unsupported statement {other:?}"))),
        }
    }
    let n = mesh.vertices.len() as i64;
    for (line_no, idx) in faces {
        let mut tri = [0u32; 3];
        for k in 0..3 {
            let i = idx[k];
            if i < 1 || i > n {
                return Err(err(line_no, format!("face index {i} out of range 1..={n}")));
            }
            tri[k] = (i - 1) as u32;
        }
        mesh.triangles.push(tri);
    }
    Ok(mesh)
}

pub fn load_obj(path: &Path) -> Result<TriMesh, ObjError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ObjError::Io { path: path.display().to_string(), source })?;
    parse_obj(&text)
}

/// Writes every vertex with its `w`, so points at infinity appear as `v x y z 0`.
pub fn write_obj(vertices: &[HVec4], triangles: &[[u32; 3]]) -> String {
    let mut out = String::new();
    for v in vertices {
        let _ = writeln!(out, "v {} {} {} {}", v.x, v.y, v.z, v.w);
    }
    for t in triangles {
        let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    out
}
