use std::f64::consts::PI;
use std::io::Write;

use super::domain::StarDomain;
use crate::error::{Error, Result};

/// Rings of the coarsest level; every refinement doubles the ring count.
pub const BASE_RINGS: usize = 4;
/// Nodes on ring `i` are `NODES_PER_RING * i`.
const NODES_PER_RING: usize = 6;
const DEGENERATE_AREA: f64 = 1e-14;

/// Conforming P1 triangulation of a star-shaped domain, built ring by ring from the origin.
///
/// Nodes are numbered ring by ring, so the boundary ring comes last and matrices assembled on
/// the mesh are banded.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<[f64; 2]>,
    /// Counter-clockwise node triples.
    pub triangles: Vec<[usize; 3]>,
    /// Boundary edges, oriented so the domain lies to the left (outward normal to the right).
    pub boundary_edges: Vec<[usize; 2]>,
    /// `symmetry_map[i]` is the node at `-nodes[i]`.
    pub symmetry_map: Vec<usize>,
    pub refinement: usize,
    pub domain: StarDomain,
}

/// Angles of the nodes on one ring: `n` uniform angles on `[0, pi)` with the domain breakpoints
/// snapped in, followed by the same angles shifted by `pi`.
fn ring_angles(n_half: usize, breakpoints: &[f64]) -> Vec<f64> {
    let mut half: Vec<f64> = (0..n_half).map(|j| PI * j as f64 / n_half as f64).collect();
    let mut taken = vec![false; n_half];
    for &b in breakpoints {
        let mut best = None;
        for j in 0..n_half {
            if taken[j] {
                continue;
            }
            let d = (half[j] - b).abs();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        if let Some((j, _)) = best {
            half[j] = b;
            taken[j] = true;
        }
    }
    half.sort_by(f64::total_cmp);
    let mut all = half.clone();
    all.extend(half.iter().map(|t| t + PI));
    all
}

/// Triangulates `domain` at the given refinement level (`refinement >= 1`).
pub fn triangulate(domain: &StarDomain, refinement: usize) -> Result<Mesh> {
    if refinement == 0 {
        return Err(Error::Parameter("refinement must be >= 1".into()));
    }
    if refinement > 12 {
        return Err(Error::Parameter(format!(
            "refinement {refinement} is beyond desk scale"
        )));
    }
    let rings = BASE_RINGS << (refinement - 1);
    let breakpoints = domain.breakpoints();

    let mut nodes = vec![[0.0, 0.0]];
    let mut symmetry_map = vec![0usize];
    let mut starts = vec![0usize];
    let mut angles: Vec<Vec<f64>> = vec![vec![]];
    for i in 1..=rings {
        let n = NODES_PER_RING * i;
        let half = n / 2;
        let theta = ring_angles(half, &breakpoints);
        let s = i as f64 / rings as f64;
        let start = nodes.len();
        starts.push(start);
        for &t in &theta[..half] {
            let r = s * domain.rho(t);
            nodes.push([r * t.cos(), r * t.sin()]);
        }
        for j in 0..half {
            let [x, y] = nodes[start + j];
            nodes.push([-x, -y]);
        }
        for j in 0..n {
            symmetry_map.push(start + (j + half) % n);
        }
        angles.push(theta);
    }

    let mut triangles = Vec::new();
    let sym = |t: [usize; 3]| [symmetry_map[t[0]], symmetry_map[t[1]], symmetry_map[t[2]]];
    for i in 1..=rings {
        let outer = &angles[i];
        let n_out = outer.len();
        let o = |j: usize| starts[i] + j % n_out;
        let mut half_tris = Vec::new();
        if i == 1 {
            for j in 0..n_out / 2 {
                half_tris.push([0, o(j), o(j + 1)]);
            }
        } else {
            let inner = &angles[i - 1];
            let n_in = inner.len();
            let inn = |j: usize| starts[i - 1] + j % n_in;
            let angle = |list: &Vec<f64>, j: usize| {
                let n = list.len();
                list[j % n] + if j >= n { 2.0 * PI } else { 0.0 }
            };
            let (mut a, mut b) = (0usize, 0usize);
            while a < n_in / 2 || b < n_out / 2 {
                let advance_outer = if a == n_in / 2 {
                    true
                } else if b == n_out / 2 {
                    false
                } else {
                    angle(outer, b + 1) <= angle(inner, a + 1)
                };
                if advance_outer {
                    half_tris.push([inn(a), o(b), o(b + 1)]);
                    b += 1;
                } else {
                    half_tris.push([inn(a), o(b), inn(a + 1)]);
                    a += 1;
                }
            }
        }
        for t in half_tris {
            triangles.push(t);
            triangles.push(sym(t));
        }
    }
    for t in triangles.iter_mut() {
        if signed_area(&nodes, t) < 0.0 {
            t.swap(1, 2);
        }
    }

    let last = starts[rings];
    let n_b = NODES_PER_RING * rings;
    let boundary_edges = (0..n_b).map(|j| [last + j, last + (j + 1) % n_b]).collect();

    let mesh = Mesh {
        nodes,
        triangles,
        boundary_edges,
        symmetry_map,
        refinement,
        domain: *domain,
    };
    mesh.validate()?;
    Ok(mesh)
}

fn signed_area(nodes: &[[f64; 2]], t: &[usize; 3]) -> f64 {
    let [a, b, c] = [nodes[t[0]], nodes[t[1]], nodes[t[2]]];
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

impl Mesh {
    pub fn triangle_area(&self, t: usize) -> f64 {
        signed_area(&self.nodes, &self.triangles[t])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| self.triangle_area(t))
            .sum()
    }

    /// Identifier of the form `domain/refN`.
    pub fn id(&self) -> String {
        format!("{}/ref{}", self.domain, self.refinement)
    }

    /// Boundary nodes in edge order.
    pub fn boundary_nodes(&self) -> Vec<usize> {
        self.boundary_edges.iter().map(|e| e[0]).collect()
    }

    /// Longest edge over all triangles.
    pub fn max_edge(&self) -> f64 {
        let mut h = 0.0f64;
        for t in &self.triangles {
            for k in 0..3 {
                let (p, q) = (self.nodes[t[k]], self.nodes[t[(k + 1) % 3]]);
                h = h.max((p[0] - q[0]).hypot(p[1] - q[1]));
            }
        }
        h
    }

    /// Largest `|i - j|` over node pairs sharing a triangle.
    pub fn bandwidth(&self) -> usize {
        self.triangles
            .iter()
            .map(|t| t.iter().max().unwrap() - t.iter().min().unwrap())
            .max()
            .unwrap_or(0)
    }

    /// Checks orientation, degeneracy, boundary closure and the symmetry involution.
    pub fn validate(&self) -> Result<()> {
        let n_t = self.triangles.len();
        if n_t == 0 {
            return Err(Error::Mesh("mesh has no triangles".into()));
        }
        let mean = self.area() / n_t as f64;
        for t in 0..n_t {
            let a = self.triangle_area(t);
            if !(a > DEGENERATE_AREA * mean) {
                return Err(Error::Mesh(format!(
                    "degenerate triangle {t} with area {a:e}"
                )));
            }
        }
        for (i, &j) in self.symmetry_map.iter().enumerate() {
            let (p, q) = (self.nodes[i], self.nodes[j]);
            if self.symmetry_map[j] != i || p[0] != -q[0] || p[1] != -q[1] {
                return Err(Error::Mesh(format!("node {i} breaks the symmetry map")));
            }
        }
        let n_b = self.boundary_edges.len();
        for k in 0..n_b {
            if self.boundary_edges[k][1] != self.boundary_edges[(k + 1) % n_b][0] {
                return Err(Error::Mesh(
                    "boundary edges do not form a closed loop".into(),
                ));
            }
        }
        let mut edge_count = std::collections::HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *edge_count.entry((a.min(b), a.max(b))).or_insert(0usize) += 1;
            }
        }
        for e in &self.boundary_edges {
            if edge_count.get(&(e[0].min(e[1]), e[0].max(e[1]))) != Some(&1) {
                return Err(Error::Mesh(format!(
                    "boundary edge {e:?} not on exactly one triangle"
                )));
            }
        }
        let boundary_like = edge_count.values().filter(|&&c| c == 1).count();
        if boundary_like != n_b || edge_count.values().any(|&c| c > 2) {
            return Err(Error::Mesh("mesh is not a conforming triangulation".into()));
        }
        Ok(())
    }

    /// Plain-text listing: a counts header, then nodes, triangles and boundary edges (0-based).
    pub fn write_text<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(
            out,
            "nodes {} triangles {} boundary_edges {}",
            self.nodes.len(),
            self.triangles.len(),
            self.boundary_edges.len()
        )?;
        for p in &self.nodes {
            writeln!(out, "{:.16e} {:.16e}", p[0], p[1])?;
        }
        for t in &self.triangles {
            writeln!(out, "{} {} {}", t[0], t[1], t[2])?;
        }
        for e in &self.boundary_edges {
            writeln!(out, "{} {}", e[0], e[1])?;
        }
        Ok(())
    }
}
