use std::collections::HashMap;

use nalgebra::{Point3, Vector3};

use super::voxel::VoxelSolid;
use super::GeomError;

/// Indexed triangle mesh.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<Point3<f64>>,
    pub triangles: Vec<[u32; 3]>,
}

impl TriangleMesh {
    pub fn corners(&self, t: &[u32; 3]) -> [Point3<f64>; 3] {
        [self.vertices[t[0] as usize], self.vertices[t[1] as usize], self.vertices[t[2] as usize]]
    }

    /// Unnormalized face normal `(b - a) × (c - a)`.
    pub fn face_normal(&self, t: &[u32; 3]) -> Vector3<f64> {
        let [a, b, c] = self.corners(t);
        (b - a).cross(&(c - a))
    }

    pub fn triangle_area(&self, t: &[u32; 3]) -> f64 {
        0.5 * self.face_normal(t).norm()
    }

    pub fn surface_area(&self) -> f64 {
        self.triangles.iter().map(|t| self.triangle_area(t)).sum()
    }

    /// Enclosed volume by the divergence theorem; positive for outward
    /// orientation.
    pub fn volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = self.corners(t);
                a.coords.dot(&b.coords.cross(&c.coords))
            })
            .sum::<f64>()
            / 6.0
    }

    /// Number of triangles sharing each undirected edge.
    pub fn edge_degrees(&self) -> HashMap<(u32, u32), usize> {
        let mut degrees = HashMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *degrees.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        degrees
    }

    /// Every edge is shared by exactly two triangles.
    pub fn is_watertight(&self) -> bool {
        !self.triangles.is_empty() && self.edge_degrees().values().all(|&d| d == 2)
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        let mut used = vec![false; self.vertices.len()];
        for t in &self.triangles {
            for &v in t {
                used[v as usize] = true;
            }
        }
        let v = used.iter().filter(|&&u| u).count() as i64;
        let e = self.edge_degrees().len() as i64;
        v - e + self.triangles.len() as i64
    }
}

/// Corner offsets of a grid cube, bit 0 = x, bit 1 = y, bit 2 = z.
const CORNERS: [[isize; 3]; 8] =
    [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]];

/// Six tetrahedra around the main diagonal 0–7. The split is translation
/// invariant, so neighboring cubes agree on shared face diagonals.
const TETS: [[usize; 4]; 6] = [[0, 1, 3, 7], [0, 1, 5, 7], [0, 2, 3, 7], [0, 2, 6, 7], [0, 4, 5, 7], [0, 4, 6, 7]];

/// Extracts the 0.5 iso-surface of the occupancy field sampled at cell
/// centers, by marching tetrahedra over the dual grid.
///
/// Cells outside the grid read as empty, so the surface is always closed.
/// Vertices sit at midpoints of lattice edges joining an occupied and an
/// empty center; the result is a 2-manifold with outward-facing triangles.
pub fn extract_mesh(solid: &VoxelSolid) -> Result<TriangleMesh, GeomError> {
    if solid.is_empty() {
        return Err(GeomError::EmptySolid);
    }
    let n = solid.resolution() as isize;
    let grid = solid.grid;
    let span = (n + 2) as u64;
    let key = |p: [isize; 3]| ((p[2] + 1) as u64 * span + (p[1] + 1) as u64) * span + (p[0] + 1) as u64;

    let mut mesh = TriangleMesh::default();
    let mut lookup: HashMap<(u64, u64), u32> = HashMap::new();
    let mut vertex = |mesh: &mut TriangleMesh, a: [isize; 3], b: [isize; 3]| -> u32 {
        let (ka, kb) = (key(a), key(b));
        let edge = (ka.min(kb), ka.max(kb));
        *lookup.entry(edge).or_insert_with(|| {
            let pa = grid.center(a[0], a[1], a[2]);
            let pb = grid.center(b[0], b[1], b[2]);
            mesh.vertices.push(Point3::from((pa.coords + pb.coords) * 0.5));
            (mesh.vertices.len() - 1) as u32
        })
    };

    for k in -1..n {
        for j in -1..n {
            for i in -1..n {
                let pos: [[isize; 3]; 8] = CORNERS.map(|o| [i + o[0], j + o[1], k + o[2]]);
                let inside: [bool; 8] = pos.map(|p| solid.get_padded(p[0], p[1], p[2]));
                if inside.iter().all(|&v| v) || inside.iter().all(|&v| !v) {
                    continue;
                }
                for tet in TETS {
                    let (ins, outs): (Vec<usize>, Vec<usize>) = tet.iter().partition(|&&c| inside[c]);
                    let polygon: Vec<(usize, usize)> = match (ins.len(), outs.len()) {
                        (1, 3) => outs.iter().map(|&o| (ins[0], o)).collect(),
                        (3, 1) => ins.iter().map(|&v| (v, outs[0])).collect(),
                        (2, 2) => vec![(ins[0], outs[0]), (ins[0], outs[1]), (ins[1], outs[1]), (ins[1], outs[0])],
                        _ => continue,
                    };
                    let ids: Vec<u32> = polygon.iter().map(|&(a, b)| vertex(&mut mesh, pos[a], pos[b])).collect();
                    let outward = grid.center(pos[outs[0]][0], pos[outs[0]][1], pos[outs[0]][2])
                        - grid.center(pos[ins[0]][0], pos[ins[0]][1], pos[ins[0]][2]);
                    let tris: &[[usize; 3]] = if ids.len() == 3 { &[[0, 1, 2]] } else { &[[0, 1, 2], [0, 2, 3]] };
                    for t in tris {
                        let mut tri = [ids[t[0]], ids[t[1]], ids[t[2]]];
                        if mesh.face_normal(&tri).dot(&outward) < 0.0 {
                            tri.swap(1, 2);
                        }
                        mesh.triangles.push(tri);
                    }
                }
            }
        }
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Grid;

    #[test]
    fn single_voxel_is_closed_with_positive_volume() {
        let mut solid = VoxelSolid::empty(Grid::cube(8));
        solid.set(3, 4, 5, true);
        let mesh = extract_mesh(&solid).unwrap();
        assert!(mesh.is_watertight());
        assert_eq!(mesh.euler_characteristic(), 2);
        // the 0.5 level set of a single lattice hat function encloses half a cell
        let cell = solid.grid.cell_volume();
        assert!((mesh.volume() - 0.5 * cell).abs() < 1e-12);
        assert!(mesh.triangles.iter().all(|t| mesh.triangle_area(t) > 0.0));
    }

    #[test]
    fn box_of_cells_has_near_exact_volume() {
        let mut solid = VoxelSolid::empty(Grid::cube(16));
        for k in 4..12 {
            for j in 2..10 {
                for i in 5..9 {
                    solid.set(i, j, k, true);
                }
            }
        }
        let mesh = extract_mesh(&solid).unwrap();
        assert!(mesh.is_watertight());
        assert_eq!(mesh.euler_characteristic(), 2);
        let exact = solid.volume();
        assert!(mesh.volume() > 0.9 * exact && mesh.volume() <= exact);
    }

    #[test]
    fn empty_solid_is_an_error() {
        let solid = VoxelSolid::empty(Grid::cube(8));
        assert!(matches!(extract_mesh(&solid), Err(GeomError::EmptySolid)));
    }

    #[test]
    fn diagonal_neighbors_stay_manifold() {
        // two cells touching only along an edge, and two only at a corner
        let mut solid = VoxelSolid::empty(Grid::cube(8));
        solid.set(2, 2, 2, true);
        solid.set(3, 3, 2, true);
        solid.set(5, 5, 5, true);
        solid.set(6, 6, 6, true);
        let mesh = extract_mesh(&solid).unwrap();
        assert!(mesh.is_watertight());
    }

    #[test]
    fn deterministic() {
        let mut solid = VoxelSolid::empty(Grid::cube(8));
        solid.set(1, 2, 3, true);
        solid.set(2, 2, 3, true);
        assert_eq!(extract_mesh(&solid).unwrap(), extract_mesh(&solid).unwrap());
    }
}
