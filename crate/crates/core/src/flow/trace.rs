//! Straight-line development on polygon surfaces with the
//! stop-at-singularity convention. All incidence tests are exact; the length
//! parameter is measured in units of the direction vector.

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::scalar::Scalar;
use crate::surface::poly::{CornerId, PolygonSurface};
use crate::trace_budget;

/// One straight piece of a developed ray, in the coordinates of `poly`.
/// `on_edge` is set when the piece runs along a glued edge.
#[derive(Clone, Debug)]
pub struct PathSeg {
    pub poly: usize,
    pub from: Vec2,
    pub to: Vec2,
    pub on_edge: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum Terminal {
    /// Hit a stopping vertex class after parameter `t`.
    ConePoint { class: usize, t: Scalar },
    /// Budget `t_max` used up; final position included.
    LengthExhausted { poly: usize, pos: Vec2 },
    /// First return to the start point at parameter `t`.
    Returned { t: Scalar },
}

#[derive(Clone, Debug)]
pub struct Trace {
    pub segments: Vec<PathSeg>,
    pub terminal: Terminal,
}

impl Trace {
    pub fn hit_cone(&self) -> bool {
        matches!(self.terminal, Terminal::ConePoint { .. })
    }
}

enum St {
    Interior { poly: usize, pos: Vec2 },
    OnEdge { poly: usize, edge: usize, pos: Vec2, forward: bool },
}

/// Stop rule: which vertex classes terminate a ray.
pub type StopRule<'a> = &'a dyn Fn(usize) -> bool;

/// Default rule: stop exactly at cone points (order >= 2).
pub fn stop_at_cones(s: &PolygonSurface) -> impl Fn(usize) -> bool + '_ {
    move |class| s.vertex_classes()[class].order >= 2
}

/// Rule for spine computations: stop at cone points, or at every vertex
/// class when the surface has none.
pub fn stop_at_anchors(s: &PolygonSurface) -> impl Fn(usize) -> bool + '_ {
    move |class| s.anchor_class(class)
}

/// Trace from a regular point. `t_max` is the development parameter bound in
/// units of `dv`. When `stop_at_start` is set, the trace reports the first
/// return to the start point.
pub fn trace_ray(
    s: &PolygonSurface,
    poly: usize,
    pos: &Vec2,
    dv: &Vec2,
    t_max: &Scalar,
    stop_at_start: bool,
    stop: StopRule,
) -> Result<Trace> {
    if dv.is_zero() {
        return Err(Error::Degenerate("zero direction".into()));
    }
    if let Some(class) = s.vertex_at(poly, pos) {
        if stop(class) {
            return Err(Error::ConePointStart);
        }
    }
    let start_reps = if stop_at_start {
        s.point_reps(poly, pos)
    } else {
        Vec::new()
    };
    let state = resolve_start(s, poly, pos, dv)?;
    run(s, state, dv, t_max, &start_reps, stop)
}

/// Trace the separatrix germ leaving the vertex of `corner` into its sector.
/// `dv` must lie in the corner's half-open sector.
pub fn trace_germ(
    s: &PolygonSurface,
    corner: CornerId,
    dv: &Vec2,
    t_max: &Scalar,
    stop: StopRule,
) -> Result<Trace> {
    let (p, i) = corner;
    let poly = s.poly(p);
    let vpos = poly.vertex(i).clone();
    let u = poly.edge_vec(i);
    let state = if u.cross(dv).is_zero() && u.dot(dv).is_positive() {
        St::OnEdge {
            poly: p,
            edge: i,
            pos: vpos,
            forward: true,
        }
    } else {
        debug_assert!(s.sector_contains(corner, dv), "germ direction outside sector");
        St::Interior { poly: p, pos: vpos }
    };
    run(s, state, dv, t_max, &[], stop)
}

fn resolve_start(s: &PolygonSurface, poly: usize, pos: &Vec2, dv: &Vec2) -> Result<St> {
    // vertex start (necessarily a flat/marked class here)
    if let Some(class) = s.vertex_at(poly, pos) {
        return continue_through_vertex(s, class, dv);
    }
    for (q, p2) in s.point_reps(poly, pos) {
        let pg = s.poly(q);
        if pg.strictly_contains(&p2) {
            return Ok(St::Interior { poly: q, pos: p2 });
        }
        // on an edge interior
        for e in 0..pg.len() {
            let ev = pg.edge_vec(e);
            let rel = p2.clone() - pg.vertex(e).clone();
            if ev.cross(&rel).is_zero() && in_edge_span(pg, e, &p2) {
                let side = ev.cross(dv);
                if side.is_positive() {
                    return Ok(St::Interior { poly: q, pos: p2 });
                }
                if side.is_zero() {
                    return Ok(St::OnEdge {
                        poly: q,
                        edge: e,
                        pos: p2,
                        forward: ev.dot(dv).is_positive(),
                    });
                }
            }
        }
    }
    Err(Error::InvalidSurface("could not orient ray start".into()))
}

fn in_edge_span(pg: &crate::surface::poly::Polygon, e: usize, p: &Vec2) -> bool {
    let a = pg.vertex(e).clone();
    let b = pg.vertex(e + 1).clone();
    let ev = b.clone() - a.clone();
    let t = ev.dot(&(p.clone() - a));
    t.signum() >= 0 && t <= ev.norm_sq()
}

fn continue_through_vertex(s: &PolygonSurface, class: usize, dv: &Vec2) -> Result<St> {
    for &(q, i) in &s.vertex_classes()[class].corners {
        let pg = s.poly(q);
        let u = pg.edge_vec(i);
        if u.cross(dv).is_zero() && u.dot(dv).is_positive() {
            return Ok(St::OnEdge {
                poly: q,
                edge: i,
                pos: pg.vertex(i).clone(),
                forward: true,
            });
        }
        if s.sector_contains((q, i), dv) {
            return Ok(St::Interior {
                poly: q,
                pos: pg.vertex(i).clone(),
            });
        }
    }
    Err(Error::InvalidSurface(
        "no sector contains direction at flat vertex".into(),
    ))
}

fn run(
    s: &PolygonSurface,
    mut state: St,
    dv: &Vec2,
    t_max: &Scalar,
    start_reps: &[(usize, Vec2)],
    stop: StopRule,
) -> Result<Trace> {
    let mut segments: Vec<PathSeg> = Vec::new();
    let mut t_done = Scalar::zero();
    let budget = trace_budget();
    for _step in 0..budget {
        let remaining = t_max.clone() - t_done.clone();
        if remaining.signum() <= 0 {
            let (poly, pos) = match &state {
                St::Interior { poly, pos } | St::OnEdge { poly, pos, .. } => (*poly, pos.clone()),
            };
            return Ok(Trace {
                segments,
                terminal: Terminal::LengthExhausted { poly, pos },
            });
        }
        match state {
            St::Interior { poly, pos } => {
                let (s_exit, hit, vertex_hit) = exit_from(s, poly, &pos, dv)?;
                // does the budget end inside this segment?
                if remaining < s_exit {
                    let end = pos.clone() + dv.scale(&remaining);
                    if let Some(t_ret) =
                        first_return_on(start_reps, poly, &pos, dv, &remaining, &t_done)
                    {
                        segments.push(PathSeg {
                            poly,
                            from: pos,
                            to: end,
                            on_edge: None,
                        });
                        return Ok(Trace {
                            segments,
                            terminal: Terminal::Returned { t: t_ret },
                        });
                    }
                    segments.push(PathSeg {
                        poly,
                        from: pos,
                        to: end.clone(),
                        on_edge: None,
                    });
                    return Ok(Trace {
                        segments,
                        terminal: Terminal::LengthExhausted { poly, pos: end },
                    });
                }
                if let Some(t_ret) = first_return_on(start_reps, poly, &pos, dv, &s_exit, &t_done) {
                    let end = pos.clone() + dv.scale(&(t_ret.clone() - t_done.clone()));
                    segments.push(PathSeg {
                        poly,
                        from: pos,
                        to: end,
                        on_edge: None,
                    });
                    return Ok(Trace {
                        segments,
                        terminal: Terminal::Returned { t: t_ret },
                    });
                }
                segments.push(PathSeg {
                    poly,
                    from: pos.clone(),
                    to: hit.clone(),
                    on_edge: None,
                });
                t_done += s_exit;
                match vertex_hit {
                    Some(class) => {
                        if stop(class) {
                            return Ok(Trace {
                                segments,
                                terminal: Terminal::ConePoint { class, t: t_done },
                            });
                        }
                        state = continue_through_vertex(s, class, dv)?;
                    }
                    None => {
                        // crossed an edge interior
                        let (edge, _) = edge_of_hit(s, poly, &hit, dv)?;
                        let tau = s.crossing_translation((poly, edge));
                        let (q, _) = (s.glued((poly, edge)).0, ());
                        state = St::Interior {
                            poly: q,
                            pos: hit + tau,
                        };
                    }
                }
            }
            St::OnEdge {
                poly,
                edge,
                pos,
                forward,
            } => {
                let pg = s.poly(poly);
                let target = if forward {
                    pg.vertex(edge + 1).clone()
                } else {
                    pg.vertex(edge).clone()
                };
                // distance in dv units
                let delta = target.clone() - pos.clone();
                let s_exit = param_of(&delta, dv);
                if remaining < s_exit {
                    let end = pos.clone() + dv.scale(&remaining);
                    if let Some(t_ret) =
                        first_return_on(start_reps, poly, &pos, dv, &remaining, &t_done)
                    {
                        segments.push(PathSeg {
                            poly,
                            from: pos,
                            to: end,
                            on_edge: Some(edge),
                        });
                        return Ok(Trace {
                            segments,
                            terminal: Terminal::Returned { t: t_ret },
                        });
                    }
                    segments.push(PathSeg {
                        poly,
                        from: pos,
                        to: end.clone(),
                        on_edge: Some(edge),
                    });
                    return Ok(Trace {
                        segments,
                        terminal: Terminal::LengthExhausted { poly, pos: end },
                    });
                }
                if let Some(t_ret) = first_return_on(start_reps, poly, &pos, dv, &s_exit, &t_done) {
                    let end = pos.clone() + dv.scale(&(t_ret.clone() - t_done.clone()));
                    segments.push(PathSeg {
                        poly,
                        from: pos,
                        to: end,
                        on_edge: Some(edge),
                    });
                    return Ok(Trace {
                        segments,
                        terminal: Terminal::Returned { t: t_ret },
                    });
                }
                segments.push(PathSeg {
                    poly,
                    from: pos,
                    to: target.clone(),
                    on_edge: Some(edge),
                });
                t_done += s_exit;
                let vidx = if forward { (edge + 1) % pg.len() } else { edge };
                let class = s.class_of_corner((poly, vidx));
                if stop(class) {
                    return Ok(Trace {
                        segments,
                        terminal: Terminal::ConePoint { class, t: t_done },
                    });
                }
                state = continue_through_vertex(s, class, dv)?;
            }
        }
    }
    Err(Error::PeriodicityUndetermined(budget))
}

/// Exit data from a polygon: (parameter, hit position, vertex class if the
/// exit lands on a vertex).
fn exit_from(
    s: &PolygonSurface,
    poly: usize,
    pos: &Vec2,
    dv: &Vec2,
) -> Result<(Scalar, Vec2, Option<usize>)> {
    let pg = s.poly(poly);
    let mut best: Option<(Scalar, Vec2)> = None;
    for e in 0..pg.len() {
        let a = pg.vertex(e).clone();
        let ev = pg.edge_vec(e);
        let denom = dv.cross(&ev);
        if denom.is_zero() {
            continue;
        }
        let t = (a.clone() - pos.clone()).cross(&ev) / denom.clone();
        if t.signum() <= 0 {
            continue;
        }
        let hit = pos.clone() + dv.scale(&t);
        // within edge span?
        let u = ev.dot(&(hit.clone() - a));
        if u.signum() < 0 || u > ev.norm_sq() {
            continue;
        }
        match &best {
            None => best = Some((t, hit)),
            Some((tb, _)) if t < *tb => best = Some((t, hit)),
            _ => {}
        }
    }
    let (t, hit) = best.ok_or_else(|| Error::InvalidSurface("ray found no exit".into()))?;
    let vertex = s.vertex_at(poly, &hit);
    Ok((t, hit, vertex))
}

/// Which edge of the polygon contains `hit` with dv crossing outward.
fn edge_of_hit(
    s: &PolygonSurface,
    poly: usize,
    hit: &Vec2,
    dv: &Vec2,
) -> Result<(usize, ())> {
    let pg = s.poly(poly);
    for e in 0..pg.len() {
        let a = pg.vertex(e).clone();
        let ev = pg.edge_vec(e);
        let rel = hit.clone() - a;
        if ev.cross(&rel).is_zero() && in_edge_span(pg, e, hit) && ev.cross(dv).is_negative() {
            return Ok((e, ()));
        }
    }
    Err(Error::InvalidSurface("exit edge not found".into()))
}

/// Parameter s with delta == s * dv (for collinear delta).
fn param_of(delta: &Vec2, dv: &Vec2) -> Scalar {
    if !dv.x.is_zero() {
        delta.x.clone() / dv.x.clone()
    } else {
        delta.y.clone() / dv.y.clone()
    }
}

/// First return to any start representative strictly inside (0, s_span].
fn first_return_on(
    start_reps: &[(usize, Vec2)],
    poly: usize,
    pos: &Vec2,
    dv: &Vec2,
    s_span: &Scalar,
    t_done: &Scalar,
) -> Option<Scalar> {
    let mut best: Option<Scalar> = None;
    for (q, rp) in start_reps {
        if *q != poly {
            continue;
        }
        let rel = rp.clone() - pos.clone();
        if !dv.cross(&rel).is_zero() {
            continue;
        }
        let sr = param_of(&rel, dv);
        if sr.signum() > 0 && sr <= *s_span {
            let t = t_done.clone() + sr;
            match &best {
                None => best = Some(t),
                Some(b) if t < *b => best = Some(t),
                _ => {}
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;
    use crate::surface::rect::RectComplex;

    fn l3_poly() -> PolygonSurface {
        let r = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let u = Perm::from_cycles(3, &[vec![0, 2]]).unwrap();
        PolygonSurface::from(&RectComplex::origami(r, u).unwrap())
    }

    fn torus_poly() -> PolygonSurface {
        PolygonSurface::from(&RectComplex::origami(Perm::identity(1), Perm::identity(1)).unwrap())
    }

    #[test]
    fn closed_horizontal_on_l3() {
        // center of cell 0, horizontal: squares 0 -> 1 -> 0, closes at t = 2
        let s = l3_poly();
        let stop = stop_at_cones(&s);
        let tr = trace_ray(
            &s,
            0,
            &Vec2::new(Scalar::ratio(1, 2), Scalar::ratio(1, 2)),
            &Vec2::from_ints(1, 0),
            &Scalar::from_int(2),
            true,
            &stop,
        )
        .unwrap();
        match tr.terminal {
            Terminal::Returned { t } => assert_eq!(t, Scalar::from_int(2)),
            ref other => panic!("expected return, got {other:?}"),
        }
    }

    #[test]
    fn diagonal_hits_cone_on_l3() {
        // from (1/2, 1/2) in cell 1 (global (3/2,1/2)) along (-1,1): the
        // development reaches the corner (1,1) at t = 1/2
        let s = l3_poly();
        let stop = stop_at_cones(&s);
        let tr = trace_ray(
            &s,
            1,
            &Vec2::new(Scalar::ratio(1, 2), Scalar::ratio(1, 2)),
            &Vec2::from_ints(-1, 1),
            &Scalar::from_int(10),
            false,
            &stop,
        )
        .unwrap();
        match tr.terminal {
            Terminal::ConePoint { t, .. } => assert_eq!(t, Scalar::ratio(1, 2)),
            ref other => panic!("expected cone hit, got {other:?}"),
        }
    }

    #[test]
    fn torus_never_stops() {
        let s = torus_poly();
        let stop = stop_at_cones(&s);
        let tr = trace_ray(
            &s,
            0,
            &Vec2::new(Scalar::ratio(1, 3), Scalar::ratio(1, 7)),
            &Vec2::from_ints(1, 1),
            &Scalar::from_int(10),
            false,
            &stop,
        )
        .unwrap();
        assert!(matches!(tr.terminal, Terminal::LengthExhausted { .. }));
    }

    #[test]
    fn reversibility() {
        // retracing from the endpoint with -dv returns to the start
        let s = l3_poly();
        let stop = stop_at_cones(&s);
        let dv = Vec2::from_ints(2, 1);
        let start = Vec2::new(Scalar::ratio(1, 3), Scalar::ratio(1, 5));
        let tr = trace_ray(&s, 0, &start, &dv, &Scalar::ratio(7, 3), false, &stop).unwrap();
        let (ep, epos) = match &tr.terminal {
            Terminal::LengthExhausted { poly, pos } => (*poly, pos.clone()),
            other => panic!("unexpected terminal {other:?}"),
        };
        let back = trace_ray(&s, ep, &epos, &(-dv), &Scalar::ratio(7, 3), false, &stop).unwrap();
        match &back.terminal {
            Terminal::LengthExhausted { poly, pos } => {
                let canon_a = s.canonical_point(*poly, pos);
                let canon_b = s.canonical_point(0, &start);
                assert_eq!(canon_a.0, canon_b.0);
                assert_eq!(canon_a.1, canon_b.1);
            }
            other => panic!("unexpected terminal {other:?}"),
        }
    }

    #[test]
    fn along_edge_trace_hits_cone() {
        // horizontal ray along the bottom edge of L3 stops at the cone point
        let s = l3_poly();
        let stop = stop_at_cones(&s);
        let tr = trace_ray(
            &s,
            0,
            &Vec2::new(Scalar::ratio(1, 2), Scalar::zero()),
            &Vec2::from_ints(1, 0),
            &Scalar::from_int(10),
            false,
            &stop,
        )
        .unwrap();
        match tr.terminal {
            Terminal::ConePoint { t, .. } => assert_eq!(t, Scalar::ratio(1, 2)),
            ref other => panic!("expected cone hit, got {other:?}"),
        }
    }
}
