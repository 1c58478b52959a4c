//! Horizontal decomposition of a polygon surface into trapezoid strips, and
//! the canonical rectangle complex obtained by intersecting the horizontal
//! and vertical decompositions.
//!
//! Cut levels start at polygon vertex heights and propagate across gluings
//! to a fixpoint; in a periodic direction the propagation terminates because
//! every level lies on a closed or singular leaf.

use crate::error::{Error, Result};
use crate::flow::saddles::SaddleConnection;
use crate::flow::trace::{self, Terminal};
use crate::flow::Cylinder;
use crate::geom::{Mat2, Vec2};
use crate::perm::Perm;
use crate::scalar::Scalar;
use crate::surface::poly::PolygonSurface;
use crate::surface::rect::RectComplex;
use crate::trace_budget;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Clone, Debug)]
pub struct Trapezoid {
    pub poly: usize,
    pub gap: usize,
    pub lo: Scalar,
    pub hi: Scalar,
    /// strip (R-cycle) id and development x-offset inside the strip
    pub strip: usize,
    pub dev_x: Scalar,
}

#[derive(Clone, Debug)]
pub struct Strip {
    pub traps: Vec<usize>,
    pub height: Scalar,
    pub circumference: Scalar,
    pub cylinder: usize,
    /// vertical position of the strip's bottom inside its cylinder
    pub y_base: Scalar,
    /// x shift aligning the strip chart with the cylinder chart
    pub x_shift: Scalar,
}

pub struct HorizontalDecomposition {
    pub levels: Vec<Vec<Scalar>>,
    pub traps: Vec<Trapezoid>,
    pub trap_at: Vec<Vec<usize>>,
    pub strips: Vec<Strip>,
    /// per cylinder: strip ids bottom to top
    pub cyl_strips: Vec<Vec<usize>>,
    /// per cylinder (circumference, height)
    pub cyl_dims: Vec<(Scalar, Scalar)>,
    /// singular level curves and the saddle connections on them
    pub singular: BTreeSet<(usize, usize)>,
    pub connections: Vec<SaddleConnection>,
    sc_at: BTreeMap<(usize, usize), Vec<usize>>,
}

impl HorizontalDecomposition {
    pub fn build(s: &PolygonSurface) -> Result<HorizontalDecomposition> {
        let budget = trace_budget();
        let n = s.num_polys();

        // 1. cut levels: vertex heights, propagated across gluings
        let mut levels: Vec<BTreeSet<Scalar>> = vec![BTreeSet::new(); n];
        let mut queue: VecDeque<(usize, Scalar)> = VecDeque::new();
        for p in 0..n {
            for v in &s.poly(p).vertices {
                if levels[p].insert(v.y.clone()) {
                    queue.push_back((p, v.y.clone()));
                }
            }
        }
        let mut total_levels: usize = levels.iter().map(|l| l.len()).sum();
        while let Some((p, y)) = queue.pop_front() {
            for e in 0..s.poly(p).len() {
                let a = s.poly(p).vertex(e);
                let b = s.poly(p).vertex(e + 1);
                let (ymin, ymax) = if a.y <= b.y {
                    (a.y.clone(), b.y.clone())
                } else {
                    (b.y.clone(), a.y.clone())
                };
                if y < ymin || y > ymax || ymin == ymax {
                    continue;
                }
                let tau = s.crossing_translation((p, e));
                let (q, _) = s.glued((p, e));
                let y2 = y.clone() + tau.y;
                if levels[q].insert(y2.clone()) {
                    total_levels += 1;
                    if total_levels > budget {
                        return Err(Error::PeriodicityUndetermined(budget));
                    }
                    queue.push_back((q, y2));
                }
            }
        }
        let levels: Vec<Vec<Scalar>> = levels
            .into_iter()
            .map(|set| set.into_iter().collect())
            .collect();

        // 2. trapezoids
        let mut traps: Vec<Trapezoid> = Vec::new();
        let mut trap_at: Vec<Vec<usize>> = vec![Vec::new(); n];
        for p in 0..n {
            for g in 0..levels[p].len() - 1 {
                let lo = levels[p][g].clone();
                let hi = levels[p][g + 1].clone();
                trap_at[p].push(traps.len());
                traps.push(Trapezoid {
                    poly: p,
                    gap: g,
                    lo,
                    hi,
                    strip: usize::MAX,
                    dev_x: Scalar::zero(),
                });
            }
        }

        // 3. right-neighbor map via chord endpoints at midlevel
        let mut rmap: Vec<(usize, Vec2)> = Vec::with_capacity(traps.len());
        for t in &traps {
            let ym = (t.lo.clone() + t.hi.clone()) / Scalar::from_int(2);
            let (_, _, e_right) = chord(s, t.poly, &ym)?;
            let tau = s.crossing_translation((t.poly, e_right));
            let (q, _) = s.glued((t.poly, e_right));
            let lo2 = t.lo.clone() + tau.y.clone();
            let g2 = levels[q]
                .iter()
                .position(|l| *l == lo2)
                .ok_or_else(|| Error::InvalidSurface("level fixpoint violated".into()))?;
            debug_assert!(
                g2 + 1 < levels[q].len() && levels[q][g2 + 1] == t.hi.clone() + tau.y.clone(),
                "image gap not aligned"
            );
            rmap.push((trap_at[q][g2], tau));
        }

        // 4. strips: cycles of the right-neighbor map with development
        let mut strips: Vec<Strip> = Vec::new();
        for t0 in 0..traps.len() {
            if traps[t0].strip != usize::MAX {
                continue;
            }
            let sid = strips.len();
            let mut members = Vec::new();
            let mut cur = t0;
            let mut dev = Scalar::zero();
            loop {
                assert_eq!(traps[cur].strip, usize::MAX, "trap in two strips");
                traps[cur].strip = sid;
                traps[cur].dev_x = dev.clone();
                members.push(cur);
                let (next, tau) = rmap[cur].clone();
                dev -= tau.x;
                if next == t0 {
                    break;
                }
                cur = next;
            }
            let circumference = dev;
            if !circumference.is_positive() {
                return Err(Error::InvalidSurface(
                    "strip development closed with non-positive circumference".into(),
                ));
            }
            let height = traps[t0].hi.clone() - traps[t0].lo.clone();
            strips.push(Strip {
                traps: members,
                height,
                circumference,
                cylinder: usize::MAX,
                y_base: Scalar::zero(),
                x_shift: Scalar::zero(),
            });
        }

        // 5. singular level marks and saddle connections from germ walks
        let mut singular: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut connections: Vec<SaddleConnection> = Vec::new();
        let mut sc_at: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let stop = trace::stop_at_anchors(s);
        let level_index = |p: usize, y: &Scalar| -> Option<usize> {
            levels[p].iter().position(|l| l == y)
        };
        let big = Scalar::from_rational(num::BigRational::from_integer(
            num::BigInt::from(budget as i64),
        ));
        for (class_id, class) in s.vertex_classes().iter().enumerate() {
            if !s.anchor_class(class_id) {
                continue;
            }
            for &corner in &class.corners {
                for dir in [Vec2::from_ints(1, 0), Vec2::from_ints(-1, 0)] {
                    let pg = s.poly(corner.0);
                    let u = pg.edge_vec(corner.1);
                    let along_u = u.cross(&dir).is_zero() && u.dot(&dir).is_positive();
                    if !(along_u || s.sector_contains(corner, &dir)) {
                        continue;
                    }
                    let tr = trace::trace_germ(s, corner, &dir, &big, &stop)?;
                    let end_class = match tr.terminal {
                        Terminal::ConePoint { class, .. } => class,
                        _ => return Err(Error::PeriodicityUndetermined(budget)),
                    };
                    let mut hol = Vec2::zero();
                    let sc_id = connections.len();
                    for seg in &tr.segments {
                        hol = hol + (seg.to.clone() - seg.from.clone());
                        let y = seg.from.y.clone();
                        let mut marks = vec![(seg.poly, y.clone())];
                        if let Some(e) = seg.on_edge {
                            let tau = s.crossing_translation((seg.poly, e));
                            let (q, _) = s.glued((seg.poly, e));
                            marks.push((q, y.clone() + tau.y));
                        }
                        for (p, yy) in marks {
                            if let Some(li) = level_index(p, &yy) {
                                singular.insert((p, li));
                                sc_at.entry((p, li)).or_default().push(sc_id);
                            }
                        }
                    }
                    connections.push(SaddleConnection {
                        start_class: class_id,
                        end_class,
                        holonomy: hol,
                    });
                }
            }
        }

        // 6. merge strips across regular level curves into cylinders
        let m = strips.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        // merge links with alignment samples: (below strip, above strip,
        // shift) meaning: X_cyl(above) = X_cyl(below) + shift agreement
        let mut links: Vec<(usize, usize, Scalar, Scalar)> = Vec::new();
        // (below, above, x_in_below_chart, x_in_above_chart) of a shared point
        for p in 0..n {
            let nl = levels[p].len();
            for li in 0..nl {
                if singular.contains(&(p, li)) {
                    continue;
                }
                let y = levels[p][li].clone();
                // trapezoid below
                let below = if li > 0 { Some(trap_at[p][li - 1]) } else { None };
                let above = if li + 1 < nl { Some(trap_at[p][li]) } else { None };
                match (below, above) {
                    (Some(tb), Some(ta)) => {
                        let (xl, _, _) = chord(s, p, &y)
                            .or_else(|_| chord_at_boundary(s, p, &y))?;
                        let xb = xl.clone() + traps[tb].dev_x.clone();
                        let xa = xl + traps[ta].dev_x.clone();
                        links.push((traps[tb].strip, traps[ta].strip, xb, xa));
                    }
                    (Some(tb), None) => {
                        // level curve along the top edge of p: cross to the
                        // glued polygon's bottom
                        if let Some((q, y2, tau)) = top_edge_partner(s, p, &y) {
                            let li2 = level_index(q, &y2)
                                .ok_or_else(|| Error::InvalidSurface("edge level missing".into()))?;
                            if li2 + 1 > levels[q].len() - 1 {
                                return Err(Error::InvalidSurface("no gap above glued edge".into()));
                            }
                            let ta = trap_at[q][li2];
                            // sample: left end of the top edge piece of p
                            let (xl, _xr) = horizontal_edge_span(s, p, &y)
                                .ok_or_else(|| Error::InvalidSurface("top edge span missing".into()))?;
                            let xb = xl.clone() + traps[tb].dev_x.clone();
                            let xa = xl + tau.x + traps[ta].dev_x.clone();
                            links.push((traps[tb].strip, traps[ta].strip, xb, xa));
                        }
                    }
                    _ => {}
                }
            }
        }
        for (a, b, _, _) in &links {
            let ra = find(&mut parent, *a);
            let rb = find(&mut parent, *b);
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut cyl_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut cyl_strips: Vec<Vec<usize>> = Vec::new();
        for sid in 0..m {
            let r = find(&mut parent, sid);
            let cid = *cyl_of_root.entry(r).or_insert_with(|| {
                cyl_strips.push(Vec::new());
                cyl_strips.len() - 1
            });
            strips[sid].cylinder = cid;
            cyl_strips[cid].push(sid);
        }

        // 7. stack strips inside each cylinder: below-above adjacency from
        // the links, then y_base and x_shift accumulation
        let mut above_of: BTreeMap<usize, (usize, Scalar)> = BTreeMap::new();
        let mut has_below: BTreeSet<usize> = BTreeSet::new();
        for (below, above, xb, xa) in &links {
            // x_shift relation: xb + shift(below) == xa + shift(above) (mod c)
            above_of
                .entry(*below)
                .or_insert((*above, xb.clone() - xa.clone()));
            has_below.insert(*above);
        }
        let mut cyl_dims: Vec<(Scalar, Scalar)> = Vec::new();
        for (cid, members) in cyl_strips.iter().enumerate() {
            let circ = strips[members[0]].circumference.clone();
            for &sid in members.iter() {
                assert!(
                    strips[sid].circumference == circ,
                    "strips of one cylinder disagree on circumference"
                );
            }
            // bottom strip: no link names it as 'above' (or, for a cylinder
            // that is a full torus with a marked leaf, pick the first)
            let bottom = members
                .iter()
                .copied()
                .find(|sid| !has_below.contains(sid))
                .unwrap_or(members[0]);
            let mut y = Scalar::zero();
            let mut shift = Scalar::zero();
            let mut cur = bottom;
            let mut count = 0;
            loop {
                strips[cur].y_base = y.clone();
                strips[cur].x_shift = shift.clone();
                y += strips[cur].height.clone();
                count += 1;
                match above_of.get(&cur) {
                    Some((next, delta)) if *next != bottom && count <= members.len() => {
                        shift = shift + delta.clone();
                        shift = shift.rem_euclid(&circ);
                        cur = *next;
                    }
                    _ => break,
                }
            }
            assert_eq!(count, members.len(), "cylinder strips do not stack");
            let _ = cid;
            cyl_dims.push((circ, y));
        }

        Ok(HorizontalDecomposition {
            levels,
            traps,
            trap_at,
            strips,
            cyl_strips,
            cyl_dims,
            singular,
            connections,
            sc_at,
        })
    }

    /// Cylinders in report form, ordered by construction (deterministic).
    pub fn cylinders(&self) -> Vec<Cylinder> {
        let mut out = Vec::new();
        for (cid, members) in self.cyl_strips.iter().enumerate() {
            let (c, h) = self.cyl_dims[cid].clone();
            // boundary saddle connections: those marked on the strips'
            // singular boundary levels
            let mut ids = BTreeSet::new();
            for &sid in members {
                for &tid in &self.strips[sid].traps {
                    let t = &self.traps[tid];
                    for li in [t.gap, t.gap + 1] {
                        if self.singular.contains(&(t.poly, li)) {
                            if let Some(v) = self.sc_at.get(&(t.poly, li)) {
                                ids.extend(v.iter().copied());
                            }
                        }
                    }
                }
            }
            let boundary = ids
                .into_iter()
                .map(|i| self.connections[i].clone())
                .collect();
            out.push(Cylinder {
                circumference: c,
                height: h,
                boundary,
            });
        }
        out
    }

    /// Cylinder-chart coordinates of a point: (cylinder, X mod c, Y).
    pub fn locate(&self, s: &PolygonSurface, poly: usize, pos: &Vec2) -> Result<(usize, Scalar, Scalar)> {
        let nl = self.levels[poly].len();
        let mut gap = None;
        for g in 0..nl - 1 {
            if self.levels[poly][g] <= pos.y && pos.y < self.levels[poly][g + 1] {
                gap = Some(g);
                break;
            }
        }
        // top boundary belongs to the last gap for lookup purposes
        if gap.is_none() && pos.y == self.levels[poly][nl - 1] {
            gap = Some(nl - 2);
        }
        let g = gap.ok_or_else(|| Error::InvalidSurface("point outside polygon levels".into()))?;
        let _ = s;
        let t = self.trap_at[poly][g];
        let trap = &self.traps[t];
        let strip = &self.strips[trap.strip];
        let (c, _h) = self.cyl_dims[strip.cylinder].clone();
        let x = (pos.x.clone() + trap.dev_x.clone() + strip.x_shift.clone()).rem_euclid(&c);
        let y = pos.y.clone() - trap.lo.clone() + strip.y_base.clone();
        Ok((strip.cylinder, x, y))
    }
}

/// Chord of the polygon at an interior level: (x_left, x_right, right edge).
fn chord(s: &PolygonSurface, p: usize, y: &Scalar) -> Result<(Scalar, Scalar, usize)> {
    let pg = s.poly(p);
    let mut xs: Vec<(Scalar, usize)> = Vec::new();
    for e in 0..pg.len() {
        let a = pg.vertex(e);
        let b = pg.vertex(e + 1);
        if a.y == b.y {
            continue;
        }
        let (ylo, yhi) = if a.y < b.y {
            (&a.y, &b.y)
        } else {
            (&b.y, &a.y)
        };
        if y < ylo || y > yhi {
            continue;
        }
        // strict at one end to avoid double counting at vertices
        if y == yhi {
            continue;
        }
        let t = (y.clone() - a.y.clone()) / (b.y.clone() - a.y.clone());
        let x = a.x.clone() + t * (b.x.clone() - a.x.clone());
        xs.push((x, e));
    }
    if xs.len() != 2 {
        return Err(Error::InvalidSurface(format!(
            "level chord found {} crossings",
            xs.len()
        )));
    }
    xs.sort_by(|u, v| u.0.cmp(&v.0));
    let (xl, _el) = xs[0].clone();
    let (xr, er) = xs[1].clone();
    Ok((xl, xr, er))
}

/// Chord data when the level touches the polygon's top or bottom edge; used
/// only for alignment samples, returns the horizontal extent.
fn chord_at_boundary(s: &PolygonSurface, p: usize, y: &Scalar) -> Result<(Scalar, Scalar, usize)> {
    let (xl, xr) = horizontal_edge_span(s, p, y)
        .ok_or_else(|| Error::InvalidSurface("no chord at level".into()))?;
    Ok((xl, xr, usize::MAX))
}

/// Extent of the horizontal edge of polygon p at height y, if any.
fn horizontal_edge_span(s: &PolygonSurface, p: usize, y: &Scalar) -> Option<(Scalar, Scalar)> {
    let pg = s.poly(p);
    for e in 0..pg.len() {
        let a = pg.vertex(e);
        let b = pg.vertex(e + 1);
        if a.y == *y && b.y == *y {
            let (xl, xr) = if a.x <= b.x {
                (a.x.clone(), b.x.clone())
            } else {
                (b.x.clone(), a.x.clone())
            };
            return Some((xl, xr));
        }
    }
    None
}

/// For a level curve running along the top edge of p at height y: the glued
/// polygon, the level there, and the crossing translation.
fn top_edge_partner(s: &PolygonSurface, p: usize, y: &Scalar) -> Option<(usize, Scalar, Vec2)> {
    let pg = s.poly(p);
    for e in 0..pg.len() {
        let a = pg.vertex(e);
        let b = pg.vertex(e + 1);
        if a.y == *y && b.y == *y && b.x < a.x {
            // top edges run right-to-left in ccw order
            let tau = s.crossing_translation((p, e));
            let (q, _) = s.glued((p, e));
            return Some((q, y.clone() + tau.y.clone(), tau));
        }
    }
    None
}

/// The canonical rectangle complex of a polygon surface with periodic
/// horizontal and vertical directions.
pub fn canonical_rect(s: &PolygonSurface) -> Result<RectComplex> {
    let h = HorizontalDecomposition::build(s)?;
    // vertical pass on the rotated surface: (x, y) -> (y, -x) takes the
    // vertical direction to (1, 0)
    let rot = Mat2::new(
        Scalar::zero(),
        Scalar::one(),
        -Scalar::one(),
        Scalar::zero(),
    );
    let rotated = s.linear_image(&rot)?;
    let v = HorizontalDecomposition::build(&rotated)?;

    // vertical spine of the original = singular levels of the rotated
    // surface: the rotation (x, y) -> (y, -x) takes the original line
    // x = xi to the level y' = -xi
    let mut vmarks: Vec<Vec<Scalar>> = vec![Vec::new(); s.num_polys()];
    for &(p, li) in &v.singular {
        vmarks[p].push(-v.levels[p][li].clone());
    }

    // cuts per cylinder: X positions of vertical spine crossings
    let ncyl = h.cyl_strips.len();
    let mut cuts: Vec<BTreeSet<Scalar>> = vec![BTreeSet::new(); ncyl];
    for t in &h.traps {
        let strip = &h.strips[t.strip];
        let (c, _) = h.cyl_dims[strip.cylinder].clone();
        // x extent of the trapezoid
        let ym = (t.lo.clone() + t.hi.clone()) / Scalar::from_int(2);
        let (xl_lo, xr_lo, _) = chord_or_edge(s, t.poly, &t.lo, &ym)?;
        let (xl_hi, xr_hi, _) = chord_or_edge(s, t.poly, &t.hi, &ym)?;
        let xmin = if xl_lo < xl_hi { xl_lo } else { xl_hi };
        let xmax = if xr_lo > xr_hi { xr_lo } else { xr_hi };
        for xi in &vmarks[t.poly] {
            if *xi < xmin || *xi > xmax {
                continue;
            }
            let x = (xi.clone() + t.dev_x.clone() + strip.x_shift.clone()).rem_euclid(&c);
            cuts[strip.cylinder].insert(x);
        }
    }
    let cuts: Vec<Vec<Scalar>> = cuts.into_iter().map(|b| b.into_iter().collect()).collect();
    for (cid, cs) in cuts.iter().enumerate() {
        if cs.is_empty() {
            return Err(Error::InvalidSurface(format!(
                "cylinder {cid} has no vertical spine crossing"
            )));
        }
    }

    // rectangles: per cylinder, one per cut gap
    let mut rect_id: Vec<Vec<usize>> = Vec::with_capacity(ncyl);
    let mut widths = Vec::new();
    let mut heights = Vec::new();
    let mut owner: Vec<(usize, usize)> = Vec::new(); // rect -> (cyl, gap)
    for (cid, cs) in cuts.iter().enumerate() {
        let (c, hgt) = h.cyl_dims[cid].clone();
        let mut ids = Vec::new();
        for (k, x0) in cs.iter().enumerate() {
            let x1 = if k + 1 < cs.len() {
                cs[k + 1].clone()
            } else {
                cs[0].clone() + c.clone()
            };
            ids.push(widths.len());
            owner.push((cid, k));
            widths.push(x1 - x0.clone());
            heights.push(hgt.clone());
        }
        rect_id.push(ids);
    }

    // sigma_r: cyclic within each cylinder
    let mut r_map = vec![0usize; widths.len()];
    for ids in &rect_id {
        for k in 0..ids.len() {
            r_map[ids[k]] = ids[(k + 1) % ids.len()];
        }
    }

    // sigma_u: follow a sample point across the top boundary
    let mut u_map = vec![0usize; widths.len()];
    for (rid, (cid, gap)) in owner.iter().enumerate() {
        let cs = &cuts[*cid];
        let (c, hgt) = h.cyl_dims[*cid].clone();
        let x0 = cs[*gap].clone();
        let x1 = if gap + 1 < cs.len() {
            cs[gap + 1].clone()
        } else {
            cs[0].clone() + c.clone()
        };
        let xm = ((x0.clone() + x1) / Scalar::from_int(2)).rem_euclid(&c);
        // find the surface point at chart (xm, top) then look just above:
        // the trapezoid with bottom at that point
        let (poly, pos) = chart_point_at_top(s, &h, *cid, &xm, &hgt)?;
        let (q, qpos) = step_above(s, &h, poly, &pos)?;
        let (cid2, x2, y2) = h.locate(s, q, &qpos)?;
        if !y2.is_zero() {
            return Err(Error::InvalidSurface("top-step landed off the boundary".into()));
        }
        // which rectangle of cid2 contains x2 (+ left offset of rid maps to
        // its left cut)
        let left_x = (x2 - (xm - cs[*gap].clone())).rem_euclid(&h.cyl_dims[cid2].0);
        let cs2 = &cuts[cid2];
        let pos2 = cs2.iter().position(|v| *v == left_x).ok_or_else(|| {
            Error::InvalidSurface("rectangle cuts misaligned across cylinders".into())
        })?;
        u_map[rid] = rect_id[cid2][pos2];
        if widths[u_map[rid]] != widths[rid] {
            return Err(Error::InvalidSurface(
                "rectangle widths misaligned across cylinders".into(),
            ));
        }
    }

    RectComplex::new(
        widths,
        heights,
        Perm::from_images(r_map).map_err(|_| Error::InvalidSurface("bad sigma_r".into()))?,
        Perm::from_images(u_map).map_err(|_| Error::InvalidSurface("bad sigma_u".into()))?,
    )
}

/// Chord extent at a level that may be a vertex level (falls back to the
/// horizontal edge span or the apex point).
fn chord_or_edge(
    s: &PolygonSurface,
    p: usize,
    y: &Scalar,
    fallback_mid: &Scalar,
) -> Result<(Scalar, Scalar, usize)> {
    if let Ok(c) = chord(s, p, y) {
        return Ok(c);
    }
    if let Some((xl, xr)) = horizontal_edge_span(s, p, y) {
        return Ok((xl, xr, usize::MAX));
    }
    // apex: single vertex at this level; use the midlevel chord end
    let pg = s.poly(p);
    for i in 0..pg.len() {
        if pg.vertex(i).y == *y {
            return Ok((pg.vertex(i).x.clone(), pg.vertex(i).x.clone(), usize::MAX));
        }
    }
    let _ = fallback_mid;
    Err(Error::InvalidSurface("no chord at level".into()))
}

/// Surface point at cylinder-chart coordinates (x, top boundary).
fn chart_point_at_top(
    s: &PolygonSurface,
    h: &HorizontalDecomposition,
    cid: usize,
    x: &Scalar,
    hgt: &Scalar,
) -> Result<(usize, Vec2)> {
    // top strip: y_base + height == hgt
    for &sid in &h.cyl_strips[cid] {
        let strip = &h.strips[sid];
        if strip.y_base.clone() + strip.height.clone() != *hgt {
            continue;
        }
        let (c, _) = h.cyl_dims[cid].clone();
        for &tid in &strip.traps {
            let t = &h.traps[tid];
            // point at level hi of this trapezoid with chart x
            let local_x = (x.clone() - t.dev_x.clone() - strip.x_shift.clone()).rem_euclid(&c);
            // the trapezoid's top chord extent
            let ym = (t.lo.clone() + t.hi.clone()) / Scalar::from_int(2);
            let (xl, xr, _) = chord_or_edge(s, t.poly, &t.hi, &ym)?;
            if local_x >= xl && local_x <= xr {
                return Ok((t.poly, Vec2::new(local_x, t.hi.clone())));
            }
            // also try shifted by c (rem ambiguity)
            let shifted = local_x.clone() + c.clone();
            if shifted >= xl && shifted <= xr {
                return Ok((t.poly, Vec2::new(shifted, t.hi.clone())));
            }
        }
    }
    Err(Error::InvalidSurface("chart point not found on top boundary".into()))
}

/// From a point on a singular level, step to its representative on the
/// bottom of the region above (same point, possibly across a horizontal
/// edge gluing).
fn step_above(
    s: &PolygonSurface,
    h: &HorizontalDecomposition,
    poly: usize,
    pos: &Vec2,
) -> Result<(usize, Vec2)> {
    // if there is a gap above this level in the same polygon, stay put
    if let Some(li) = h.levels[poly].iter().position(|l| *l == pos.y) {
        if li + 1 < h.levels[poly].len() {
            return Ok((poly, pos.clone()));
        }
    }
    // otherwise cross the top edge gluing
    let pg = s.poly(poly);
    for e in 0..pg.len() {
        let a = pg.vertex(e);
        let b = pg.vertex(e + 1);
        if a.y == pos.y && b.y == pos.y {
            let (xl, xr) = if a.x <= b.x {
                (&a.x, &b.x)
            } else {
                (&b.x, &a.x)
            };
            if pos.x >= *xl && pos.x <= *xr && b.x < a.x {
                let tau = s.crossing_translation((poly, e));
                let (q, _) = s.glued((poly, e));
                return Ok((q, pos.clone() + tau));
            }
        }
    }
    Err(Error::InvalidSurface("no region above point".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn l3_poly() -> PolygonSurface {
        let r = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let u = Perm::from_cycles(3, &[vec![0, 2]]).unwrap();
        PolygonSurface::from(&RectComplex::origami(r, u).unwrap())
    }

    #[test]
    fn l3_horizontal_cylinders() {
        let s = l3_poly();
        let dec = HorizontalDecomposition::build(&s).unwrap();
        let mut dims: Vec<(Scalar, Scalar)> = dec.cyl_dims.clone();
        dims.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(dims.len(), 2);
        assert_eq!(dims[0], (Scalar::one(), Scalar::one()));
        assert_eq!(dims[1], (Scalar::from_int(2), Scalar::one()));
    }

    #[test]
    fn l3_canonical_rect_is_itself() {
        let s = l3_poly();
        let rc = canonical_rect(&s).unwrap();
        assert_eq!(rc.num_cells(), 3);
        assert_eq!(rc.genus(), 2);
        let orig = RectComplex::origami(
            Perm::from_cycles(3, &[vec![0, 1]]).unwrap(),
            Perm::from_cycles(3, &[vec![0, 2]]).unwrap(),
        )
        .unwrap();
        assert!(rc.isomorphism_to(&orig).is_some());
    }

    #[test]
    fn torus_canonical_rect() {
        let t = RectComplex::origami(Perm::identity(1), Perm::identity(1)).unwrap();
        let s = PolygonSurface::from(&t);
        let rc = canonical_rect(&s).unwrap();
        assert_eq!(rc.num_cells(), 1);
        assert_eq!(rc.genus(), 1);
    }
}
