//! Affine homeomorphisms: Dehn multitwists in parabolic directions, the
//! affine involution, fixed points, and Veech group membership tests.

use crate::error::{Error, Result};
use crate::flow::{self, Direction};
use crate::geom::{Mat2, Vec2};
use crate::perm::Perm;
use crate::scalar::Scalar;
use crate::surface::{Point, RectComplex, Surface};
use num::BigInt;

/// How the map acts on points.
#[derive(Clone, Debug)]
pub enum MapKind {
    /// cell-to-cell: p in cell i goes to derivative * p + offset[i] in
    /// cell target[i]
    Cell { target: Vec<usize>, offset: Vec<Vec2> },
    /// power of the full Dehn multitwist along an axis; the shear already
    /// includes the power
    Twist { horizontal: bool, shear: Scalar },
    /// composition, applied left to right
    Word(Vec<AffineMap>),
    /// derivative only (non-axis twists); application unsupported
    LinearOnly,
}

#[derive(Clone, Debug)]
pub struct AffineMap {
    pub derivative: Mat2,
    pub kind: MapKind,
}

impl AffineMap {
    pub fn identity(s: &Surface) -> AffineMap {
        let n = s.rect().num_cells();
        AffineMap {
            derivative: Mat2::identity(),
            kind: MapKind::Cell {
                target: (0..n).collect(),
                offset: vec![Vec2::zero(); n],
            },
        }
    }

    /// `self` then `other`; the derivative is the product in application
    /// order (homomorphism property of the differential).
    pub fn then(&self, other: &AffineMap) -> AffineMap {
        let mut word = match &self.kind {
            MapKind::Word(w) => w.clone(),
            _ => vec![self.clone()],
        };
        match &other.kind {
            MapKind::Word(w) => word.extend(w.iter().cloned()),
            _ => word.push(other.clone()),
        }
        AffineMap {
            derivative: other.derivative.mul(&self.derivative),
            kind: MapKind::Word(word),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        match &self.kind {
            MapKind::Twist { horizontal, shear } => AffineMap {
                derivative: if *horizontal {
                    Mat2::shear_h(-shear.clone())
                } else {
                    Mat2::shear_v(-shear.clone())
                },
                kind: MapKind::Twist {
                    horizontal: *horizontal,
                    shear: -shear.clone(),
                },
            },
            MapKind::Cell { target, offset } => {
                let perm = Perm::from_images(target.clone()).expect("cell map is a bijection");
                let inv = perm.inverse();
                let a_inv = self.derivative.inv();
                let n = target.len();
                let mut t2 = vec![0usize; n];
                let mut o2 = vec![Vec2::zero(); n];
                for i in 0..n {
                    let j = inv.apply(i);
                    t2[i] = j;
                    // q = A p + t  =>  p = A^-1 q - A^-1 t
                    o2[i] = -a_inv.apply(&offset[j]);
                }
                AffineMap {
                    derivative: a_inv,
                    kind: MapKind::Cell {
                        target: t2,
                        offset: o2,
                    },
                }
            }
            MapKind::Word(w) => {
                let mut inv_word: Vec<AffineMap> = w.iter().rev().map(|m| m.inverse()).collect();
                let derivative = self.derivative.inv();
                if inv_word.len() == 1 {
                    inv_word.pop().unwrap()
                } else {
                    AffineMap {
                        derivative,
                        kind: MapKind::Word(inv_word),
                    }
                }
            }
            MapKind::LinearOnly => AffineMap {
                derivative: self.derivative.inv(),
                kind: MapKind::LinearOnly,
            },
        }
    }

    /// Exact image of a point. Cone points map to cone points of equal
    /// order; boundary points are canonicalized.
    pub fn apply(&self, s: &Surface, p: &Point) -> Result<Point> {
        let rc = s.rect();
        match &self.kind {
            MapKind::Cell { target, offset } => {
                let q = rc.canonical_point(p);
                let img = self.derivative.apply(&q.pos()) + offset[q.cell].clone();
                Ok(rc.normalize_excess(target[q.cell], img))
            }
            MapKind::Twist { horizontal, shear } => {
                let rd = s.rect_decomposition()?;
                let q = rd.to_canonical(s, p);
                let c = &rd.complex;
                let moved = if *horizontal {
                    let (cells, pos_of) = cycle_layout(c, rd.rows(), q.cell, true);
                    let circ = cells
                        .iter()
                        .fold(Scalar::zero(), |a, &x| a + c.width(x).clone());
                    let x_global = pos_of[&q.cell].clone() + q.x.clone();
                    let x_new = (x_global + shear.clone() * q.y.clone()).rem_euclid(&circ);
                    locate_in_cycle(c, &cells, &x_new, true, q.y.clone())
                } else {
                    let (cells, pos_of) = cycle_layout(c, rd.cols(), q.cell, false);
                    let circ = cells
                        .iter()
                        .fold(Scalar::zero(), |a, &x| a + c.height(x).clone());
                    let y_global = pos_of[&q.cell].clone() + q.y.clone();
                    let y_new = (y_global + shear.clone() * q.x.clone()).rem_euclid(&circ);
                    locate_in_cycle(c, &cells, &y_new, false, q.x.clone())
                };
                rd.from_canonical(s, &moved)
            }
            MapKind::Word(w) => {
                let mut cur = p.clone();
                for m in w {
                    cur = m.apply(s, &cur)?;
                }
                Ok(cur)
            }
            MapKind::LinearOnly => Err(Error::Unsupported(
                "pointwise application of a non-axis parabolic".into(),
            )),
        }
    }

    /// Diagonal action on a pair.
    pub fn apply_diag(&self, s: &Surface, pair: (&Point, &Point)) -> Result<(Point, Point)> {
        Ok((self.apply(s, pair.0)?, self.apply(s, pair.1)?))
    }
}

/// Cells of the row/column cycle through `cell`, with each cell's offset
/// along the cycle (anchored at the cycle's minimal cell).
fn cycle_layout<'a>(
    c: &RectComplex,
    groups: &'a [Vec<usize>],
    cell: usize,
    horizontal: bool,
) -> (Vec<usize>, std::collections::BTreeMap<usize, Scalar>) {
    let group = groups
        .iter()
        .find(|g| g.contains(&cell))
        .expect("cell in some cycle");
    // rotate so the cycle starts at its min element, preserving cyclic order
    let min_pos = group
        .iter()
        .enumerate()
        .min_by_key(|(_, &x)| x)
        .map(|(i, _)| i)
        .unwrap();
    let cells: Vec<usize> = group[min_pos..]
        .iter()
        .chain(group[..min_pos].iter())
        .copied()
        .collect();
    let mut pos_of = std::collections::BTreeMap::new();
    let mut x = Scalar::zero();
    for &g in &cells {
        pos_of.insert(g, x.clone());
        x += if horizontal {
            c.width(g).clone()
        } else {
            c.height(g).clone()
        };
    }
    (cells, pos_of)
}

/// Cell and local coordinates at cycle position `x` (transverse coordinate
/// passed through).
fn locate_in_cycle(
    c: &RectComplex,
    cells: &[usize],
    x: &Scalar,
    horizontal: bool,
    transverse: Scalar,
) -> Point {
    let mut acc = Scalar::zero();
    for &g in cells {
        let w = if horizontal {
            c.width(g).clone()
        } else {
            c.height(g).clone()
        };
        let next = acc.clone() + w;
        if *x < next {
            let local = x.clone() - acc;
            return if horizontal {
                Point::new(g, local, transverse)
            } else {
                Point::new(g, transverse, local)
            };
        }
        acc = next;
    }
    // x == circumference: wrap to the start
    let g = cells[0];
    if horizontal {
        Point::new(g, Scalar::zero(), transverse)
    } else {
        Point::new(g, transverse, Scalar::zero())
    }
}

/// Dehn multitwist data in a parabolic direction.
pub struct Twist {
    pub map: AffineMap,
    /// full twists per cylinder, in decomposition order
    pub powers: Vec<BigInt>,
    pub shear: Scalar,
}

/// The minimal positive multitwist in the given direction: its shear is the
/// least `a` such that `a * height / circumference` is an integer for every
/// cylinder of the direction.
pub fn dehn_twist(s: &Surface, dir: &Direction) -> Result<Twist> {
    let cyls = flow::cylinder_decomposition(s, dir)?;
    let inverse_moduli: Vec<Scalar> = cyls
        .iter()
        .map(|c| c.circumference.clone() / c.height.clone())
        .collect();
    let mu0 = inverse_moduli[0].clone();
    let mut ps: Vec<BigInt> = Vec::new();
    let mut qs: Vec<BigInt> = Vec::new();
    for mu in &inverse_moduli {
        let r = mu.clone() / mu0.clone();
        let r = r.to_rational().ok_or_else(|| {
            Error::NotParabolic(format!("incommensurable moduli ratio {}", mu.clone() / mu0.clone()))
        })?;
        ps.push(r.numer().clone());
        qs.push(r.denom().clone());
    }
    use num::Integer;
    let lcm_p = ps.iter().fold(BigInt::from(1), |a, p| a.lcm(p));
    let gcd_q = qs.iter().fold(BigInt::from(0), |a, q| a.gcd(q));
    let x = num::BigRational::new(lcm_p, gcd_q);
    let shear = mu0 * Scalar::from_rational(x);
    let powers: Vec<BigInt> = inverse_moduli
        .iter()
        .map(|mu| {
            let k = shear.clone() / mu.clone();
            k.to_rational()
                .expect("twist power rational")
                .to_integer()
        })
        .collect();
    let map = if dir.is_horizontal() || dir.is_vertical() {
        AffineMap {
            derivative: if dir.is_horizontal() {
                Mat2::shear_h(shear.clone())
            } else {
                Mat2::shear_v(shear.clone())
            },
            kind: MapKind::Twist {
                horizontal: dir.is_horizontal(),
                shear: shear.clone(),
            },
        }
    } else {
        let m = dir.to_horizontal_matrix();
        let derivative = m.inv().mul(&Mat2::shear_h(shear.clone())).mul(&m);
        AffineMap {
            derivative,
            kind: MapKind::LinearOnly,
        }
    };
    Ok(Twist { map, powers, shear })
}

/// Integer power of the minimal twist along an axis.
pub fn twist_power(s: &Surface, horizontal: bool, k: i64) -> Result<AffineMap> {
    let dir = if horizontal {
        Direction::horizontal()
    } else {
        Direction::vertical()
    };
    let t = dehn_twist(s, &dir)?;
    let shear = t.shear * Scalar::from_int(k);
    Ok(AffineMap {
        derivative: if horizontal {
            Mat2::shear_h(shear.clone())
        } else {
            Mat2::shear_v(shear.clone())
        },
        kind: MapKind::Twist { horizontal, shear },
    })
}

/// All cell relabelings realizing an affine map with derivative +I or -I.
fn cell_maps_with_sign(rc: &RectComplex, negative: bool) -> Vec<Perm> {
    let n = rc.num_cells();
    let sr = rc.sigma_r().clone();
    let su = rc.sigma_u().clone();
    let (tr, tu) = if negative {
        (sr.inverse(), su.inverse())
    } else {
        (sr.clone(), su.clone())
    };
    let mut found = Vec::new();
    'root: for root in 0..n {
        let mut map = vec![usize::MAX; n];
        map[0] = root;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let img = map[c];
            if rc.width(c) != rc.width(img) || rc.height(c) != rc.height(img) {
                continue 'root;
            }
            for (src, dst) in [
                (sr.apply(c), tr.apply(img)),
                (su.apply(c), tu.apply(img)),
            ] {
                if map[src] == usize::MAX {
                    map[src] = dst;
                    queue.push_back(src);
                } else if map[src] != dst {
                    continue 'root;
                }
            }
        }
        let perm = match Perm::from_images(map) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let ok = (0..n).all(|c| {
            perm.apply(sr.apply(c)) == tr.apply(perm.apply(c))
                && perm.apply(su.apply(c)) == tu.apply(perm.apply(c))
        });
        if ok {
            found.push(perm);
        }
    }
    found
}

fn cell_map_to_affine(rc: &RectComplex, perm: &Perm, negative: bool) -> AffineMap {
    let n = rc.num_cells();
    let mut offset = Vec::with_capacity(n);
    for i in 0..n {
        if negative {
            let j = perm.apply(i);
            offset.push(Vec2::new(rc.width(j).clone(), rc.height(j).clone()));
        } else {
            offset.push(Vec2::zero());
        }
    }
    AffineMap {
        derivative: if negative {
            Mat2::neg_identity()
        } else {
            Mat2::identity()
        },
        kind: MapKind::Cell {
            target: (0..n).map(|i| perm.apply(i)).collect(),
            offset,
        },
    }
}

/// Affine involutions (derivative -I, square = identity). The first one in
/// canonical order is returned along with the total count; on reduced
/// surfaces the count is 1 whenever an involution exists.
pub fn involutions(s: &Surface) -> Vec<AffineMap> {
    let rc = s.rect();
    cell_maps_with_sign(rc, true)
        .into_iter()
        .filter(|p| {
            let sq = p.compose(p);
            sq == Perm::identity(rc.num_cells())
        })
        .map(|p| cell_map_to_affine(rc, &p, true))
        .collect()
}

pub fn involution(s: &Surface) -> Option<AffineMap> {
    involutions(s).into_iter().next()
}

/// Translation automorphisms (derivative +I), including the identity.
pub fn translation_automorphisms(s: &Surface) -> Vec<AffineMap> {
    let rc = s.rect();
    cell_maps_with_sign(rc, false)
        .into_iter()
        .map(|p| cell_map_to_affine(rc, &p, false))
        .collect()
}

/// Exact fixed points of a cell-to-cell affine map with derivative -I:
/// cell centers, edge midpoints, and fixed vertex classes.
pub fn fixed_points(s: &Surface, map: &AffineMap) -> Result<Vec<Point>> {
    let rc = s.rect();
    let (target, _offset) = match &map.kind {
        MapKind::Cell { target, offset } => (target, offset),
        _ => {
            return Err(Error::Unsupported(
                "fixed points only for cell-to-cell maps".into(),
            ))
        }
    };
    if map.derivative != Mat2::neg_identity() {
        return Err(Error::Unsupported(
            "fixed points implemented for derivative -I".into(),
        ));
    }
    let two = Scalar::from_int(2);
    let mut out: Vec<Point> = Vec::new();
    let mut push = |p: Point, out: &mut Vec<Point>| {
        let c = rc.canonical_point(&p);
        if !out.contains(&c) {
            out.push(c);
        }
    };
    for i in 0..rc.num_cells() {
        // interior: center of a cell mapped to itself
        if target[i] == i {
            push(
                Point::new(i, rc.width(i).clone() / two.clone(), rc.height(i).clone() / two.clone()),
                &mut out,
            );
        }
        // bottom edge of i maps onto the bottom edge of sigma_u(target[i])
        if rc.sigma_u().apply(target[i]) == i {
            push(
                Point::new(i, rc.width(i).clone() / two.clone(), Scalar::zero()),
                &mut out,
            );
        }
        // left edge of i maps onto the left edge of sigma_r(target[i])
        if rc.sigma_r().apply(target[i]) == i {
            push(
                Point::new(i, Scalar::zero(), rc.height(i).clone() / two.clone()),
                &mut out,
            );
        }
    }
    // vertices: class of BL(i) maps to class of TR(target[i])
    for (class_id, class) in rc.vertex_classes().iter().enumerate() {
        let rep = class.cells[0];
        let img_class = rc.class_at(target[rep], crate::surface::Corner::TopRight);
        if img_class == class_id {
            // canonical corner point of the class
            let p = rc
                .corner_reps(class_id)
                .into_iter()
                .min_by(|a, b| (a.cell, &a.x, &a.y).partial_cmp(&(b.cell, &b.x, &b.y)).unwrap())
                .unwrap();
            push(p, &mut out);
        }
    }
    out.sort_by(|a, b| (a.cell, &a.x, &a.y).partial_cmp(&(b.cell, &b.x, &b.y)).unwrap());
    Ok(out)
}

/// Membership test: A * S translation-isomorphic to S. Decided by comparing
/// canonical rectangle complexes.
pub fn is_in_veech_group(s: &Surface, a: &Mat2) -> Result<bool> {
    if a.det() != Scalar::one() {
        return Err(Error::Unsupported("matrix must have determinant 1".into()));
    }
    let d = s.field_d();
    for entry in [&a.a, &a.b, &a.c, &a.d] {
        let ed = entry.radicand();
        if ed != 0 && d != 0 && ed != d {
            return Err(Error::FieldMismatch(d, ed));
        }
        if ed != 0 && d == 0 {
            return Err(Error::FieldMismatch(0, ed));
        }
    }
    if *a == Mat2::identity() {
        return Ok(true);
    }
    let (canon_s, _) = s.rect().canonicalize();
    let image = s.engine_poly().linear_image(a)?;
    let canon_img = flow::canonical_rect_of_polygons(&image)?;
    Ok(canon_img.isomorphism_to(&canon_s).is_some())
}

/// Principal congruence subgroup of level 2: integer entries, det 1,
/// congruent to the identity mod 2.
pub fn in_gamma2(a: &Mat2) -> Result<bool> {
    if !a.is_integer() {
        return Err(Error::Unsupported("matrix entries must be integers".into()));
    }
    if a.det() != Scalar::one() {
        return Err(Error::Unsupported("matrix must have determinant 1".into()));
    }
    let even = |s: &Scalar, shift: i64| -> bool {
        let r = s.to_rational().unwrap().to_integer() - BigInt::from(shift);
        (r % BigInt::from(2)) == BigInt::from(0)
    };
    Ok(even(&a.a, 1) && even(&a.b, 0) && even(&a.c, 0) && even(&a.d, 1))
}
