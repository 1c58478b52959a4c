//! Saddle connection enumeration: candidate holonomies from a development
//! search, each validated by exact germ tracing.

use crate::error::Result;
use crate::flow::trace::{self, Terminal};
use crate::geom::Vec2;
use crate::scalar::Scalar;
use crate::surface::{RectComplex, Surface};
use std::collections::{BTreeSet, VecDeque};

/// Oriented saddle connection: vertex classes of the engine complex and the
/// exact holonomy vector. Both orientations of a connection appear in
/// enumeration results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaddleConnection {
    pub start_class: usize,
    pub end_class: usize,
    pub holonomy: Vec2,
}

impl SaddleConnection {
    pub fn length_sq(&self) -> Scalar {
        self.holonomy.norm_sq()
    }
}

/// Development positions (cell, anchor) reachable with the cell block within
/// squared distance `radius_sq` of the origin.
fn dev_positions(rc: &RectComplex, start_cell: usize, start_shift: Vec2, radius_sq: &Scalar) -> Vec<(usize, Vec2)> {
    let mut seen: BTreeSet<(usize, Vec2)> = BTreeSet::new();
    let mut queue: VecDeque<(usize, Vec2)> = VecDeque::new();
    let first = (start_cell, start_shift);
    seen.insert(first.clone());
    queue.push_back(first);
    let ri = rc.sigma_r().inverse();
    let ui = rc.sigma_u().inverse();
    let zero = Scalar::zero();
    let block_dist_sq = |t: &Vec2, c: usize| -> Scalar {
        let dx_lo = -(t.x.clone() + rc.width(c).clone());
        let dx = if t.x.is_positive() {
            t.x.clone()
        } else if dx_lo.is_positive() {
            dx_lo
        } else {
            zero.clone()
        };
        let dy_lo = -(t.y.clone() + rc.height(c).clone());
        let dy = if t.y.is_positive() {
            t.y.clone()
        } else if dy_lo.is_positive() {
            dy_lo
        } else {
            zero.clone()
        };
        dx.clone() * dx + dy.clone() * dy
    };
    let mut out = Vec::new();
    while let Some((c, t)) = queue.pop_front() {
        out.push((c, t.clone()));
        let steps = [
            (
                rc.sigma_r().apply(c),
                Vec2::new(t.x.clone() + rc.width(c).clone(), t.y.clone()),
            ),
            (
                rc.sigma_u().apply(c),
                Vec2::new(t.x.clone(), t.y.clone() + rc.height(c).clone()),
            ),
            (
                ri.apply(c),
                Vec2::new(t.x.clone() - rc.width(ri.apply(c)).clone(), t.y.clone()),
            ),
            (
                ui.apply(c),
                Vec2::new(t.x.clone(), t.y.clone() - rc.height(ui.apply(c)).clone()),
            ),
        ];
        for (nb, nt) in steps {
            if block_dist_sq(&nt, nb) > *radius_sq {
                continue;
            }
            let key = (nb, nt.clone());
            if seen.insert(key) {
                queue.push_back((nb, nt));
            }
        }
    }
    out
}

/// All oriented saddle connections of length at most `l_max` (euclidean),
/// sorted by squared length then holonomy. A surface without cone points has
/// none.
pub fn saddle_connections_up_to(s: &Surface, l_max: &Scalar) -> Result<Vec<SaddleConnection>> {
    let rc = s.rect();
    let ps = s.engine_poly();
    let cones = rc.cone_points();
    if cones.is_empty() {
        return Ok(Vec::new());
    }
    let radius_sq = l_max.clone() * l_max.clone();
    // engine class id of each polygon-surface class, via BL corners
    let rc_class_of_ps: Vec<usize> = {
        let mut map = vec![usize::MAX; ps.vertex_classes().len()];
        for (rc_id, class) in rc.vertex_classes().iter().enumerate() {
            for &cell in &class.cells {
                let ps_id = ps.class_of_corner((cell, 0));
                map[ps_id] = rc_id;
            }
        }
        map
    };
    let mut out: Vec<SaddleConnection> = Vec::new();
    for &(class_id, _order) in &cones {
        // base corner: BL of the class's first cell
        let base_cell = rc.vertex_classes()[class_id].cells[0];
        let devs = dev_positions(rc, base_cell, Vec2::zero(), &radius_sq);
        // candidate holonomies: cone corners of developed cells
        let mut cands: BTreeSet<Vec2> = BTreeSet::new();
        for (c, t) in &devs {
            let corner_classes = [
                (rc.class_at(*c, crate::surface::Corner::BottomLeft), Vec2::zero()),
                (
                    rc.class_at(*c, crate::surface::Corner::BottomRight),
                    Vec2::new(rc.width(*c).clone(), Scalar::zero()),
                ),
                (
                    rc.class_at(*c, crate::surface::Corner::TopLeft),
                    Vec2::new(Scalar::zero(), rc.height(*c).clone()),
                ),
                (
                    rc.class_at(*c, crate::surface::Corner::TopRight),
                    Vec2::new(rc.width(*c).clone(), rc.height(*c).clone()),
                ),
            ];
            for (cl, rel) in corner_classes {
                if rc.vertex_classes()[cl].order() < 2 {
                    continue;
                }
                let v = t.clone() + rel;
                if v.is_zero() || v.norm_sq() > radius_sq {
                    continue;
                }
                cands.insert(v);
            }
        }
        // validate through every germ of the start class; distinct germs
        // with equal holonomy are distinct connections and all listed
        let stop = trace::stop_at_cones(ps);
        let ps_class = ps.class_of_corner((base_cell, 0));
        for v in cands {
            for &corner in &ps.vertex_classes()[ps_class].corners {
                if !ps.sector_contains(corner, &v) {
                    continue;
                }
                let tr = trace::trace_germ(ps, corner, &v, &Scalar::one(), &stop)?;
                if let Terminal::ConePoint { class, t } = &tr.terminal {
                    if *t == Scalar::one() {
                        out.push(SaddleConnection {
                            start_class: class_id,
                            end_class: rc_class_of_ps[*class],
                            holonomy: v.clone(),
                        });
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (a.length_sq(), &a.holonomy, a.start_class, a.end_class)
            .partial_cmp(&(b.length_sq(), &b.holonomy, b.start_class, b.end_class))
            .unwrap()
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;
    use crate::surface::rect::RectComplex;
    use crate::surface::Surface;

    fn l3() -> Surface {
        let r = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let u = Perm::from_cycles(3, &[vec![0, 2]]).unwrap();
        Surface::from_rect("L3", RectComplex::origami(r, u).unwrap())
    }

    #[test]
    fn torus_has_none() {
        let t = Surface::from_rect(
            "torus",
            RectComplex::origami(Perm::identity(1), Perm::identity(1)).unwrap(),
        );
        assert!(saddle_connections_up_to(&t, &Scalar::from_int(3))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn l3_unit_connections() {
        let s = l3();
        let scs = saddle_connections_up_to(&s, &Scalar::one()).unwrap();
        // 3 horizontal oriented east + 3 west + 3 north + 3 south
        assert_eq!(scs.len(), 12);
        for sc in &scs {
            assert_eq!(sc.length_sq(), Scalar::one());
            // negation present
            let neg = SaddleConnection {
                start_class: sc.end_class,
                end_class: sc.start_class,
                holonomy: -sc.holonomy.clone(),
            };
            assert!(scs.contains(&neg));
        }
    }

    #[test]
    fn l3_diagonals_at_sqrt2() {
        let s = l3();
        let l = Scalar::sqrt_of(2);
        let scs = saddle_connections_up_to(&s, &l).unwrap();
        let diag: Vec<_> = scs
            .iter()
            .filter(|sc| sc.length_sq() == Scalar::from_int(2))
            .collect();
        assert_eq!(diag.len(), 12);
        assert_eq!(scs.len(), 24);
    }
}
