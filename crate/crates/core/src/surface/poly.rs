//! Translation surfaces presented by convex polygons with translation
//! gluings. This is the general presentation: the regular 2n-gon surfaces
//! live here, and rectangle complexes embed trivially.

use crate::error::{Error, Result};
use crate::geom::{Mat2, Vec2};
use crate::scalar::Scalar;

/// Convex polygon, vertices counterclockwise. Straight (angle pi) corners are
/// allowed; they arise when a long side is glued in several pieces.
#[derive(Clone, Debug)]
pub struct Polygon {
    pub vertices: Vec<Vec2>,
}

impl Polygon {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Vec2 {
        &self.vertices[i % self.vertices.len()]
    }

    /// Edge i runs from vertex i to vertex i+1.
    pub fn edge_vec(&self, i: usize) -> Vec2 {
        self.vertex(i + 1).clone() - self.vertex(i).clone()
    }

    pub fn contains(&self, p: &Vec2) -> bool {
        (0..self.len()).all(|i| {
            let e = self.edge_vec(i);
            let rel = p.clone() - self.vertex(i).clone();
            e.cross(&rel).signum() >= 0
        })
    }

    pub fn strictly_contains(&self, p: &Vec2) -> bool {
        (0..self.len()).all(|i| {
            let e = self.edge_vec(i);
            let rel = p.clone() - self.vertex(i).clone();
            e.cross(&rel).is_positive()
        })
    }

    pub fn area2(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..self.len() {
            acc += self.vertex(i).cross(self.vertex(i + 1));
        }
        acc
    }
}

/// Directed edge id: (polygon, edge index).
pub type EdgeId = (usize, usize);

/// Corner id: (polygon, vertex index).
pub type CornerId = (usize, usize);

#[derive(Clone, Debug)]
pub struct PolyVertexClass {
    pub corners: Vec<CornerId>,
    pub order: usize,
}

#[derive(Clone)]
pub struct PolygonSurface {
    polys: Vec<Polygon>,
    gluing: Vec<Vec<EdgeId>>,
    field_d: u64,
    classes: Vec<PolyVertexClass>,
    class_of_corner: Vec<Vec<usize>>,
}

impl PolygonSurface {
    pub fn new(polys: Vec<Polygon>, gluing_pairs: &[(EdgeId, EdgeId)]) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::InvalidSurface("no polygons".into()));
        }
        let mut field_d = 0u64;
        for poly in &polys {
            if poly.len() < 3 {
                return Err(Error::InvalidSurface("polygon with fewer than 3 vertices".into()));
            }
            if !poly.area2().is_positive() {
                return Err(Error::InvalidSurface("polygon not positively oriented".into()));
            }
            for i in 0..poly.len() {
                let e = poly.edge_vec(i);
                if e.is_zero() {
                    return Err(Error::Degenerate("zero-length edge".into()));
                }
                let turn = e.cross(&poly.edge_vec(i + 1));
                if turn.is_negative() {
                    return Err(Error::InvalidSurface("polygon not convex".into()));
                }
                for s in [&poly.vertex(i).x, &poly.vertex(i).y] {
                    let d = s.radicand();
                    if d != 0 {
                        if field_d != 0 && field_d != d {
                            return Err(Error::FieldMismatch(field_d, d));
                        }
                        field_d = d;
                    }
                }
            }
        }
        let mut gluing: Vec<Vec<Option<EdgeId>>> =
            polys.iter().map(|p| vec![None; p.len()]).collect();
        for &((p, e), (p2, e2)) in gluing_pairs {
            if p >= polys.len() || e >= polys[p].len() || p2 >= polys.len() || e2 >= polys[p2].len()
            {
                return Err(Error::InvalidSurface("gluing index out of range".into()));
            }
            if (p, e) == (p2, e2) {
                return Err(Error::InvalidSurface("edge glued to itself".into()));
            }
            if gluing[p][e].is_some() || gluing[p2][e2].is_some() {
                return Err(Error::InvalidSurface("edge glued twice".into()));
            }
            // paired edges are parallel translates with opposite boundary
            // orientation: b' - a' == a - b
            let a = polys[p].vertex(e).clone();
            let b = polys[p].vertex(e + 1).clone();
            let a2 = polys[p2].vertex(e2).clone();
            let b2 = polys[p2].vertex(e2 + 1).clone();
            if b2 - a2.clone() != a.clone() - b {
                return Err(Error::InvalidSurface(format!(
                    "edges ({p},{e}) and ({p2},{e2}) are not opposite translates"
                )));
            }
            gluing[p][e] = Some((p2, e2));
            gluing[p2][e2] = Some((p, e));
        }
        let gluing: Vec<Vec<EdgeId>> = gluing
            .into_iter()
            .enumerate()
            .map(|(p, v)| {
                v.into_iter()
                    .enumerate()
                    .map(|(e, g)| g.ok_or(Error::InvalidSurface(format!("edge ({p},{e}) unglued"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        let mut s = PolygonSurface {
            polys,
            gluing,
            field_d,
            classes: Vec::new(),
            class_of_corner: Vec::new(),
        };
        s.compute_classes()?;
        if !s.connected() {
            return Err(Error::Disconnected);
        }
        Ok(s)
    }

    fn connected(&self) -> bool {
        let n = self.polys.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(p) = stack.pop() {
            for e in 0..self.polys[p].len() {
                let (q, _) = self.gluing[p][e];
                if !seen[q] {
                    seen[q] = true;
                    count += 1;
                    stack.push(q);
                }
            }
        }
        count == n
    }

    /// Rotating counterclockwise around the vertex at corner (p, i): cross
    /// the incoming edge e_{i-1} and land on the corner at the start of the
    /// partner edge.
    fn next_corner_ccw(&self, (p, i): CornerId) -> CornerId {
        let m = self.polys[p].len();
        let prev_edge = (i + m - 1) % m;
        self.gluing[p][prev_edge]
    }

    fn compute_classes(&mut self) -> Result<()> {
        self.class_of_corner = self.polys.iter().map(|p| vec![usize::MAX; p.len()]).collect();
        let mut classes = Vec::new();
        for p in 0..self.polys.len() {
            for i in 0..self.polys[p].len() {
                if self.class_of_corner[p][i] != usize::MAX {
                    continue;
                }
                let id = classes.len();
                let mut corners = Vec::new();
                let mut cur = (p, i);
                loop {
                    self.class_of_corner[cur.0][cur.1] = id;
                    corners.push(cur);
                    cur = self.next_corner_ccw(cur);
                    if cur == (p, i) {
                        break;
                    }
                    if self.class_of_corner[cur.0][cur.1] != usize::MAX {
                        return Err(Error::InvalidSurface("corner rotation not cyclic".into()));
                    }
                }
                // total angle around the class must be 2*pi*k: count how many
                // corner sectors contain a fixed probe direction
                let east = Vec2::from_ints(1, 0);
                let north = Vec2::from_ints(0, 1);
                let o_e: usize = corners
                    .iter()
                    .filter(|&&c| self.sector_contains(c, &east))
                    .count();
                let o_n: usize = corners
                    .iter()
                    .filter(|&&c| self.sector_contains(c, &north))
                    .count();
                if o_e != o_n || o_e == 0 {
                    return Err(Error::InvalidSurface(format!(
                        "vertex class angle is not a multiple of 2*pi (probe counts {o_e}/{o_n})"
                    )));
                }
                classes.push(PolyVertexClass { corners, order: o_e });
            }
        }
        self.classes = classes;
        Ok(())
    }

    /// Does the half-open corner sector [outgoing edge dir, reversed incoming
    /// edge dir) contain direction `dv`? Straight corners span angle pi.
    pub fn sector_contains(&self, (p, i): CornerId, dv: &Vec2) -> bool {
        let poly = &self.polys[p];
        let m = poly.len();
        let u = poly.edge_vec(i); // outgoing
        let w = -poly.edge_vec((i + m - 1) % m); // reversed incoming
        let along_u = u.cross(dv).is_zero() && u.dot(dv).is_positive();
        if along_u {
            return true;
        }
        u.cross(dv).is_positive() && dv.cross(&w).is_positive()
    }

    pub fn num_polys(&self) -> usize {
        self.polys.len()
    }

    pub fn poly(&self, p: usize) -> &Polygon {
        &self.polys[p]
    }

    pub fn polys(&self) -> &[Polygon] {
        &self.polys
    }

    pub fn glued(&self, e: EdgeId) -> EdgeId {
        self.gluing[e.0][e.1]
    }

    pub fn gluing_pairs(&self) -> Vec<(EdgeId, EdgeId)> {
        let mut out = Vec::new();
        for p in 0..self.polys.len() {
            for e in 0..self.polys[p].len() {
                let partner = self.gluing[p][e];
                if (p, e) < partner {
                    out.push(((p, e), partner));
                }
            }
        }
        out
    }

    /// Translation applied when crossing edge `e` outward.
    pub fn crossing_translation(&self, e: EdgeId) -> Vec2 {
        let (p2, e2) = self.gluing[e.0][e.1];
        let b = self.polys[e.0].vertex(e.1 + 1).clone();
        let a2 = self.polys[p2].vertex(e2).clone();
        // b maps to the start of the partner edge... the edge start a maps to
        // b2 and b maps to a2; the translation is a2 - b
        a2 - b
    }

    pub fn field_d(&self) -> u64 {
        self.field_d
    }

    pub fn vertex_classes(&self) -> &[PolyVertexClass] {
        &self.classes
    }

    pub fn class_of_corner(&self, c: CornerId) -> usize {
        self.class_of_corner[c.0][c.1]
    }

    pub fn cone_points(&self) -> Vec<(usize, usize)> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, cl)| cl.order >= 2)
            .map(|(i, cl)| (i, cl.order))
            .collect()
    }

    pub fn has_cone_points(&self) -> bool {
        self.classes.iter().any(|cl| cl.order >= 2)
    }

    pub fn anchor_class(&self, class: usize) -> bool {
        if self.has_cone_points() {
            self.classes[class].order >= 2
        } else {
            true
        }
    }

    pub fn genus(&self) -> usize {
        let v = self.classes.len() as i64;
        let e: i64 = self.polys.iter().map(|p| p.len() as i64).sum::<i64>() / 2;
        let f = self.polys.len() as i64;
        let chi = v - e + f;
        ((2 - chi) / 2) as usize
    }

    pub fn area(&self) -> Scalar {
        let mut a = Scalar::zero();
        for p in &self.polys {
            a += p.area2();
        }
        a / Scalar::from_int(2)
    }

    /// Gauss-Bonnet: sum of (order - 1) over cone points equals 2g - 2.
    /// Orders come from probe counts and the genus from the Euler
    /// characteristic, so the two sides are computed independently.
    pub fn gauss_bonnet_holds(&self) -> bool {
        let total: i64 = self.cone_points().iter().map(|(_, o)| *o as i64 - 1).sum();
        total == 2 * self.genus() as i64 - 2
    }

    /// Apply a linear map to every chart; gluings keep their combinatorics.
    pub fn linear_image(&self, m: &Mat2) -> Result<PolygonSurface> {
        if !m.det().is_positive() {
            return Err(Error::Unsupported("orientation-reversing matrix".into()));
        }
        let polys = self
            .polys
            .iter()
            .map(|p| Polygon {
                vertices: p.vertices.iter().map(|v| m.apply(v)).collect(),
            })
            .collect();
        PolygonSurface::new(polys, &self.gluing_pairs())
    }

    /// Point on the surface in polygon-local terms.
    pub fn contains_point(&self, p: usize, pos: &Vec2) -> bool {
        p < self.polys.len() && self.polys[p].contains(pos)
    }

    /// Which vertex class a position belongs to, if it is a vertex.
    pub fn vertex_at(&self, p: usize, pos: &Vec2) -> Option<usize> {
        let poly = &self.polys[p];
        (0..poly.len())
            .find(|&i| poly.vertex(i) == pos)
            .map(|i| self.class_of_corner[p][i])
    }

    pub fn is_cone_point(&self, p: usize, pos: &Vec2) -> bool {
        self.vertex_at(p, pos)
            .map(|cl| self.classes[cl].order >= 2)
            .unwrap_or(false)
    }

    /// All representatives of a point.
    pub fn point_reps(&self, p: usize, pos: &Vec2) -> Vec<(usize, Vec2)> {
        if let Some(class) = self.vertex_at(p, pos) {
            return self.classes[class]
                .corners
                .iter()
                .map(|&(q, i)| (q, self.polys[q].vertex(i).clone()))
                .collect();
        }
        let mut reps = vec![(p, pos.clone())];
        let poly = &self.polys[p];
        for e in 0..poly.len() {
            let ev = poly.edge_vec(e);
            let rel = pos.clone() - poly.vertex(e).clone();
            if ev.cross(&rel).is_zero() {
                // interior point of edge e
                let t = self.crossing_translation((p, e));
                let (q, _) = self.gluing[p][e];
                reps.push((q, pos.clone() + t));
            }
        }
        reps
    }

    pub fn canonical_point(&self, p: usize, pos: &Vec2) -> (usize, Vec2) {
        self.point_reps(p, pos)
            .into_iter()
            .min_by(|a, b| (a.0, &a.1).partial_cmp(&(b.0, &b.1)).unwrap())
            .unwrap()
    }
}

/// Embed a rectangle complex as a polygon surface (cells become rectangles
/// anchored at the origin; coordinates agree with cell-local ones).
impl From<&crate::surface::rect::RectComplex> for PolygonSurface {
    fn from(rc: &crate::surface::rect::RectComplex) -> Self {
        let n = rc.num_cells();
        let mut polys = Vec::with_capacity(n);
        for c in 0..n {
            let w = rc.width(c).clone();
            let h = rc.height(c).clone();
            polys.push(Polygon {
                vertices: vec![
                    Vec2::zero(),
                    Vec2::new(w.clone(), Scalar::zero()),
                    Vec2::new(w, h.clone()),
                    Vec2::new(Scalar::zero(), h),
                ],
            });
        }
        // edges: 0 bottom, 1 right, 2 top, 3 left
        let mut pairs = Vec::new();
        for c in 0..n {
            let r = rc.sigma_r().apply(c);
            pairs.push(((c, 1), (r, 3)));
            let u = rc.sigma_u().apply(c);
            pairs.push(((c, 2), (u, 0)));
        }
        // dedupe (each pair appears once; self-gluings c->c listed once)
        pairs.sort();
        pairs.dedup();
        // remove mirror duplicates ((a),(b)) vs ((b),(a))
        let mut seen = std::collections::BTreeSet::new();
        let mut uniq = Vec::new();
        for (a, b) in pairs {
            let key = if a < b { (a, b) } else { (b, a) };
            if seen.insert(key) {
                uniq.push((a, b));
            }
        }
        PolygonSurface::new(polys, &uniq).expect("rect complex is a valid polygon surface")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;
    use crate::surface::rect::RectComplex;

    #[test]
    fn square_torus() {
        let one = Scalar::one;
        let sq = Polygon {
            vertices: vec![
                Vec2::zero(),
                Vec2::new(one(), Scalar::zero()),
                Vec2::new(one(), one()),
                Vec2::new(Scalar::zero(), one()),
            ],
        };
        let s = PolygonSurface::new(sq.into_single(), &[((0, 0), (0, 2)), ((0, 1), (0, 3))]).unwrap();
        assert_eq!(s.genus(), 1);
        assert!(s.cone_points().is_empty());
        assert_eq!(s.vertex_classes().len(), 1);
        assert_eq!(s.vertex_classes()[0].order, 1);
    }

    impl Polygon {
        fn into_single(self) -> Vec<Polygon> {
            vec![self]
        }
    }

    #[test]
    fn rect_complex_embedding() {
        let r = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let u = Perm::from_cycles(3, &[vec![0, 2]]).unwrap();
        let rc = RectComplex::origami(r, u).unwrap();
        let ps = PolygonSurface::from(&rc);
        assert_eq!(ps.genus(), 2);
        assert_eq!(ps.cone_points().len(), 1);
        assert_eq!(ps.cone_points()[0].1, 3);
        assert_eq!(ps.area(), Scalar::from_int(3));
    }
}
