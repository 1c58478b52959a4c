//! Geodesic tracing, cylinder decompositions in periodic directions, the
//! rectangle decomposition, and saddle connection enumeration.

pub mod saddles;
pub mod strips;
pub mod trace;

pub use saddles::{saddle_connections_up_to, SaddleConnection};
pub use trace::{trace_germ, trace_ray, PathSeg, Terminal, Trace};

use crate::error::{Error, Result};
use crate::geom::{Mat2, Vec2};
use crate::scalar::Scalar;
use crate::surface::{CellTransport, Point, PolygonSurface, RectComplex, Surface};

/// Primitive direction vector. Rational directions normalize to coprime
/// integers; quadratic ones to (p/q, 1) by the leading-coefficient
/// convention. Opposite vectors normalize to the same direction.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Direction {
    v: Vec2,
}

impl Direction {
    pub fn new(v: Vec2) -> Result<Direction> {
        if v.is_zero() {
            return Err(Error::Degenerate("zero direction".into()));
        }
        // orient: y > 0, or y == 0 and x > 0
        let v = if v.y.is_negative() || (v.y.is_zero() && v.x.is_negative()) {
            -v
        } else {
            v
        };
        let both_rational = v.x.is_rational() && v.y.is_rational();
        if both_rational {
            let rx = v.x.to_rational().unwrap();
            let ry = v.y.to_rational().unwrap();
            use num::Integer;
            let denom_lcm = rx.denom().lcm(ry.denom());
            let ax = (rx * num::BigRational::from_integer(denom_lcm.clone())).to_integer();
            let ay = (ry * num::BigRational::from_integer(denom_lcm)).to_integer();
            let g = ax.gcd(&ay);
            let x = Scalar::from_rational(num::BigRational::from_integer(ax / g.clone()));
            let y = Scalar::from_rational(num::BigRational::from_integer(ay / g));
            return Ok(Direction { v: Vec2::new(x, y) });
        }
        // quadratic entries: scale so the second coordinate is 1 (or the
        // first, for horizontal)
        if v.y.is_zero() {
            return Ok(Direction {
                v: Vec2::from_ints(1, 0),
            });
        }
        let x = v.x.clone() / v.y.clone();
        Ok(Direction {
            v: Vec2::new(x, Scalar::one()),
        })
    }

    pub fn horizontal() -> Direction {
        Direction {
            v: Vec2::from_ints(1, 0),
        }
    }

    pub fn vertical() -> Direction {
        Direction {
            v: Vec2::from_ints(0, 1),
        }
    }

    pub fn vector(&self) -> &Vec2 {
        &self.v
    }

    pub fn is_horizontal(&self) -> bool {
        self.v.y.is_zero()
    }

    pub fn is_vertical(&self) -> bool {
        self.v.x.is_zero()
    }

    /// Determinant-one matrix taking this direction to (1, 0).
    pub fn to_horizontal_matrix(&self) -> Mat2 {
        let p = self.v.x.clone();
        let q = self.v.y.clone();
        if !p.is_zero() {
            Mat2::new(p.inv(), Scalar::zero(), -q, p.clone())
        } else {
            Mat2::new(Scalar::zero(), q.inv(), -q.clone(), Scalar::zero())
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{}", self.v.x, self.v.y)
    }
}

/// Maximal flat cylinder in a periodic direction. Circumference and height
/// are measured in the frame where the primitive direction vector is (1, 0);
/// for horizontal and vertical directions this is the euclidean value.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub circumference: Scalar,
    pub height: Scalar,
    /// saddle connections on the two boundary leaves (class ids + holonomy)
    pub boundary: Vec<SaddleConnection>,
}

impl Cylinder {
    /// Modulus: transverse height divided by core circumference.
    pub fn modulus(&self) -> Scalar {
        self.height.clone() / self.circumference.clone()
    }
}

/// Cylinder decomposition of a surface in a periodic direction.
pub fn cylinder_decomposition(s: &Surface, dir: &Direction) -> Result<Vec<Cylinder>> {
    if dir.is_horizontal() || dir.is_vertical() {
        let rd = rectangle_decomposition(s)?;
        return Ok(axis_cylinders(&rd, dir.is_horizontal()));
    }
    let m = dir.to_horizontal_matrix();
    let image = s.poly().linear_image(&m)?;
    let dec = strips::HorizontalDecomposition::build(&image)?;
    Ok(dec.cylinders())
}

/// Moduli pairwise commensurable? Returns the certificate of ratios
/// modulus_i / modulus_0 when parabolic.
pub fn is_parabolic(s: &Surface, dir: &Direction) -> Result<(bool, Vec<Scalar>)> {
    let cyls = cylinder_decomposition(s, dir)?;
    let m0 = cyls[0].modulus();
    let mut ratios = Vec::new();
    let mut ok = true;
    for c in &cyls {
        let r = c.modulus() / m0.clone();
        if !r.is_rational() {
            ok = false;
        }
        ratios.push(r);
    }
    Ok((ok, ratios))
}

/// The rectangle decomposition: cells of the canonical complex are exactly
/// the closures of the components of the surface minus the horizontal and
/// vertical spines.
#[derive(Clone)]
pub struct RectDecomposition {
    pub complex: RectComplex,
    transport: CellTransport,
    row_of: Vec<usize>,
    col_of: Vec<usize>,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl RectDecomposition {
    pub fn num_rectangles(&self) -> usize {
        self.complex.num_cells()
    }

    /// Rectangle containing a point of the engine complex.
    pub fn rectangle_of(&self, s: &Surface, p: &Point) -> usize {
        let q = self.transport.apply(&self.complex, &s.rect().canonical_point(p));
        q.cell
    }

    /// Point mapped into canonical rectangle coordinates.
    pub fn to_canonical(&self, s: &Surface, p: &Point) -> Point {
        self.transport.apply(&self.complex, &s.rect().canonical_point(p))
    }

    /// Inverse transport: canonical rectangle point back to engine
    /// coordinates.
    pub fn from_canonical(&self, s: &Surface, q: &Point) -> Result<Point> {
        let rc = s.rect();
        let q = self.complex.canonical_point(q);
        for e in 0..rc.num_cells() {
            if self.transport.target[e] != q.cell {
                continue;
            }
            let off = &self.transport.offset[e];
            let x = q.x.clone() - off.x.clone();
            let y = q.y.clone() - off.y.clone();
            if x.signum() >= 0 && y.signum() >= 0 && x <= *rc.width(e) && y <= *rc.height(e) {
                return Ok(rc.canonical_point(&Point::new(e, x, y)));
            }
        }
        Err(Error::InvalidSurface(
            "canonical point not covered by engine cells".into(),
        ))
    }

    /// Horizontal cylinder (row of the canonical complex) containing p.
    pub fn h_cylinder_of(&self, s: &Surface, p: &Point) -> usize {
        self.row_of[self.rectangle_of(s, p)]
    }

    pub fn v_cylinder_of(&self, s: &Surface, p: &Point) -> usize {
        self.col_of[self.rectangle_of(s, p)]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    /// Rectangles adjacent to `r`: those sharing its horizontal or vertical
    /// cylinder.
    pub fn neighbors(&self, r: usize) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for &x in &self.rows[self.row_of[r]] {
            if x != r && !out.contains(&x) {
                out.push(x);
            }
        }
        for &x in &self.cols[self.col_of[r]] {
            if x != r && !out.contains(&x) {
                out.push(x);
            }
        }
        out
    }
}

pub fn rectangle_decomposition(s: &Surface) -> Result<RectDecomposition> {
    let (complex, transport) = s.rect().canonicalize();
    let rows = complex.sigma_r().cycles();
    let cols = complex.sigma_u().cycles();
    let mut row_of = vec![0; complex.num_cells()];
    for (k, r) in rows.iter().enumerate() {
        for &c in r {
            row_of[c] = k;
        }
    }
    let mut col_of = vec![0; complex.num_cells()];
    for (k, col) in cols.iter().enumerate() {
        for &c in col {
            col_of[c] = k;
        }
    }
    Ok(RectDecomposition {
        complex,
        transport,
        row_of,
        col_of,
        rows,
        cols,
    })
}

/// Horizontal (or vertical) cylinders read off the canonical complex: each
/// row (column) is one cylinder.
fn axis_cylinders(rd: &RectDecomposition, horizontal: bool) -> Vec<Cylinder> {
    let c = &rd.complex;
    let groups = if horizontal { &rd.rows } else { &rd.cols };
    let mut out = Vec::new();
    for cells in groups {
        let (circ, height) = if horizontal {
            let circ = cells
                .iter()
                .fold(Scalar::zero(), |acc, &x| acc + c.width(x).clone());
            (circ, c.height(cells[0]).clone())
        } else {
            let circ = cells
                .iter()
                .fold(Scalar::zero(), |acc, &x| acc + c.height(x).clone());
            (circ, c.width(cells[0]).clone())
        };
        let boundary = boundary_connections(c, cells, horizontal);
        out.push(Cylinder {
            circumference: circ,
            height,
            boundary,
        });
    }
    out
}

/// Saddle connections along the two boundary leaves of a cylinder given by
/// its cells in cyclic order.
fn boundary_connections(
    c: &RectComplex,
    cells: &[usize],
    horizontal: bool,
) -> Vec<SaddleConnection> {
    use crate::surface::Corner;
    let mut out = Vec::new();
    // walk each boundary leaf splitting at anchor vertices
    for top in [false, true] {
        let mut anchors: Vec<(usize, Scalar)> = Vec::new(); // (class, position)
        let mut x = Scalar::zero();
        for &cell in cells {
            let class = match (horizontal, top) {
                (true, false) => c.class_at(cell, Corner::BottomLeft),
                (true, true) => c.class_at(cell, Corner::TopLeft),
                (false, false) => c.class_at(cell, Corner::BottomLeft),
                (false, true) => c.class_at(cell, Corner::BottomRight),
            };
            if c.anchor_class(class) {
                anchors.push((class, x.clone()));
            }
            x += if horizontal {
                c.width(cell).clone()
            } else {
                c.height(cell).clone()
            };
        }
        let total = x;
        if anchors.is_empty() {
            continue;
        }
        for i in 0..anchors.len() {
            let (cl, ref x0) = anchors[i];
            let (cl2, x1) = if i + 1 < anchors.len() {
                (anchors[i + 1].0, anchors[i + 1].1.clone())
            } else {
                (anchors[0].0, total.clone() + anchors[0].1.clone())
            };
            let len = x1 - x0.clone();
            let holonomy = if horizontal {
                Vec2::new(len, Scalar::zero())
            } else {
                Vec2::new(Scalar::zero(), len)
            };
            out.push(SaddleConnection {
                start_class: cl,
                end_class: cl2,
                holonomy,
            });
        }
    }
    out
}

/// Canonical rectangle complex of a polygon surface, via its horizontal and
/// vertical decompositions. Fails if either direction is not periodic within
/// the trace budget.
pub fn canonical_rect_of_polygons(poly: &PolygonSurface) -> Result<RectComplex> {
    strips::canonical_rect(poly)
}

/// Commensurability-based arithmeticity detection. Either the absolute
/// period lattice exists (all generators commensurable coordinate-wise) and
/// the surface is a translation cover of R^2 / lattice, or a witness pair of
/// incommensurable periods is returned.
pub enum Arithmeticity {
    Arithmetic {
        /// basis of the period lattice (a, 0), (s, b) in Hermite-like form
        lattice: (Vec2, Vec2),
        degree: Scalar,
    },
    NonArithmetic {
        witness: (Scalar, Scalar),
    },
}

pub fn arithmeticity_detect(s: &Surface) -> Result<Arithmeticity> {
    let rc = s.rect();
    let (_pos, wraps) = rc.develop();
    if wraps.is_empty() {
        return Err(Error::InvalidSurface("no absolute periods".into()));
    }
    // Check x parts pairwise commensurable, same for y, by scaling each to a
    // common irrational unit.
    let xs: Vec<Scalar> = wraps.iter().map(|w| w.x.clone()).filter(|v| !v.is_zero()).collect();
    let ys: Vec<Scalar> = wraps.iter().map(|w| w.y.clone()).filter(|v| !v.is_zero()).collect();
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::InvalidSurface("period lattice has rank < 2".into()));
    }
    for vals in [&xs, &ys] {
        for i in 1..vals.len() {
            let r = vals[i].clone() / vals[0].clone();
            if !r.is_rational() {
                return Ok(Arithmeticity::NonArithmetic {
                    witness: (vals[i].clone(), vals[0].clone()),
                });
            }
        }
    }
    // rational lattice spanned by the wrap vectors, after scaling x by x0
    // and y by y0
    let x0 = xs[0].clone();
    let y0 = ys[0].clone();
    let rows: Vec<(num::BigRational, num::BigRational)> = wraps
        .iter()
        .map(|w| {
            let a = (w.x.clone() / x0.clone()).to_rational().expect("commensurable");
            let b = (w.y.clone() / y0.clone()).to_rational().expect("commensurable");
            (a, b)
        })
        .collect();
    let (e1, e2) = rational_lattice_basis(&rows);
    let b1 = Vec2::new(Scalar::from_rational(e1.0) * x0.clone(), Scalar::from_rational(e1.1) * y0.clone());
    let b2 = Vec2::new(Scalar::from_rational(e2.0) * x0.clone(), Scalar::from_rational(e2.1) * y0.clone());
    let det = b1.cross(&b2).abs();
    let degree = s.area() / det;
    Ok(Arithmeticity::Arithmetic {
        lattice: (b1, b2),
        degree,
    })
}

/// Hermite-style basis of the subgroup of Q^2 generated by the rows.
fn rational_lattice_basis(
    rows: &[(num::BigRational, num::BigRational)],
) -> (
    (num::BigRational, num::BigRational),
    (num::BigRational, num::BigRational),
) {
    use num::{BigInt, BigRational, Integer, One, Zero};
    // scale to integers
    let mut denom = BigInt::one();
    for (a, b) in rows {
        denom = denom.lcm(a.denom());
        denom = denom.lcm(b.denom());
    }
    let scaled: Vec<(BigInt, BigInt)> = rows
        .iter()
        .map(|(a, b)| {
            (
                (a * BigRational::from_integer(denom.clone())).to_integer(),
                (b * BigRational::from_integer(denom.clone())).to_integer(),
            )
        })
        .collect();
    // integer row reduction to Hermite form with two rows
    let mut g1 = (BigInt::zero(), BigInt::zero()); // (x, 0)
    let mut g2 = (BigInt::zero(), BigInt::zero()); // (s, y)
    for (a, b) in scaled {
        let (mut a, mut b) = (a, b);
        // reduce the y part against g2
        if !b.is_zero() {
            if g2.1.is_zero() {
                g2 = (a.clone(), b.clone());
                a = BigInt::zero();
                b = BigInt::zero();
            } else {
                // gcd combine on y components
                let (mut r1, mut r2) = (g2.clone(), (a, b));
                while !r2.1.is_zero() {
                    let q = r1.1.clone() / r2.1.clone();
                    let new = (r1.0.clone() - q.clone() * r2.0.clone(), r1.1.clone() - q * r2.1.clone());
                    r1 = r2;
                    r2 = new;
                }
                g2 = r1;
                a = r2.0;
                b = BigInt::zero();
            }
        }
        let _ = b;
        // now (a, 0): fold into g1
        if !a.is_zero() {
            if g1.0.is_zero() {
                g1 = (a, BigInt::zero());
            } else {
                g1 = (g1.0.gcd(&a), BigInt::zero());
            }
        }
    }
    // sign normalization, then reduce g2.0 modulo g1.0
    if g1.0 < BigInt::zero() {
        g1.0 = -g1.0;
    }
    if g2.1 < BigInt::zero() {
        g2 = (-g2.0, -g2.1);
    }
    if !g1.0.is_zero() && !g2.1.is_zero() {
        let m = g2.0.mod_floor(&g1.0);
        g2.0 = m;
    }
    let d = BigRational::from_integer(denom);
    (
        (
            BigRational::from_integer(g1.0) / d.clone(),
            BigRational::from_integer(BigInt::zero()),
        ),
        (
            BigRational::from_integer(g2.0) / d.clone(),
            BigRational::from_integer(g2.1) / d,
        ),
    )
}
