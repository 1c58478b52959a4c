//! Surface construction and validation.

pub mod builders;
pub mod format;
pub mod poly;
pub mod rect;

pub use poly::{Polygon, PolygonSurface};
pub use rect::{CellTransport, Corner, Point, RectComplex, VertexClass};

use crate::error::Result;
use crate::geom::Vec2;
use crate::scalar::Scalar;

/// A translation cover pi: cover -> base, stored cell-wise: cover cells map
/// into base cells by translation.
#[derive(Clone)]
pub struct Covering {
    pub base: RectComplex,
    /// base cell per cover cell
    pub cell_map: Vec<usize>,
    /// offset of the cover cell inside its base cell
    pub cell_offset: Vec<Vec2>,
}

impl Covering {
    pub fn project(&self, cover: &RectComplex, p: &Point) -> Point {
        let _ = cover;
        let t = self.cell_map[p.cell];
        let xy = p.pos() + self.cell_offset[p.cell].clone();
        self.base.normalize_excess(t, xy)
    }

    /// All preimages of a base point, canonicalized and deduplicated.
    pub fn fibre(&self, cover: &RectComplex, base_pt: &Point) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for rep in self.base.point_reps(base_pt) {
            for c in 0..cover.num_cells() {
                if self.cell_map[c] != rep.cell {
                    continue;
                }
                let local = rep.pos() - self.cell_offset[c].clone();
                if local.x.signum() >= 0
                    && local.y.signum() >= 0
                    && local.x <= *cover.width(c)
                    && local.y <= *cover.height(c)
                {
                    let q = cover.canonical_point(&Point::new(c, local.x, local.y));
                    if !out.contains(&q) {
                        out.push(q);
                    }
                }
            }
        }
        out.sort_by(|a, b| (a.cell, &a.x, &a.y).partial_cmp(&(b.cell, &b.x, &b.y)).unwrap());
        out
    }

    pub fn degree(&self, cover: &RectComplex) -> Scalar {
        cover.area() / self.base.area()
    }
}

/// How the surface was given; used for canonical dumps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// unit-square origami
    Origami,
    /// general polygons (includes weighted rectangle complexes)
    Polygons,
}

/// A translation surface with its engine form (rectangle complex) and its
/// display presentation (polygons). Point-valued operations always use the
/// rectangle complex coordinates.
#[derive(Clone)]
pub struct Surface {
    pub name: String,
    rect: RectComplex,
    engine_poly: PolygonSurface,
    native_poly: Option<PolygonSurface>,
    pub covering: Option<Covering>,
    pub source: Source,
    decomp: std::sync::OnceLock<crate::flow::RectDecomposition>,
}

impl Surface {
    /// Surface whose engine form is the given rectangle complex.
    pub fn from_rect(name: impl Into<String>, rect: RectComplex) -> Surface {
        let engine_poly = PolygonSurface::from(&rect);
        let source = if rect.is_unit() {
            Source::Origami
        } else {
            Source::Polygons
        };
        Surface {
            name: name.into(),
            engine_poly,
            rect,
            native_poly: None,
            covering: None,
            source,
            decomp: std::sync::OnceLock::new(),
        }
    }

    /// Surface given by polygons; the engine form is the canonical rectangle
    /// complex computed from the horizontal and vertical decompositions.
    /// Point-valued operations use the canonical rectangle coordinates.
    pub fn from_polygons(name: impl Into<String>, poly: PolygonSurface) -> Result<Surface> {
        let rect = crate::flow::canonical_rect_of_polygons(&poly)?;
        let engine_poly = PolygonSurface::from(&rect);
        Ok(Surface {
            name: name.into(),
            rect,
            engine_poly,
            native_poly: Some(poly),
            covering: None,
            source: Source::Polygons,
            decomp: std::sync::OnceLock::new(),
        })
    }

    pub fn with_covering(mut self, covering: Covering) -> Surface {
        self.covering = Some(covering);
        self
    }

    pub fn rect(&self) -> &RectComplex {
        &self.rect
    }

    /// Native presentation when the surface was built from polygons, else
    /// the cell presentation of the engine complex.
    pub fn poly(&self) -> &PolygonSurface {
        self.native_poly.as_ref().unwrap_or(&self.engine_poly)
    }

    /// Polygon view of the engine complex: coordinates agree with engine
    /// cell coordinates.
    pub fn engine_poly(&self) -> &PolygonSurface {
        &self.engine_poly
    }

    /// Cached rectangle decomposition (canonical complex with transports).
    pub fn rect_decomposition(&self) -> Result<&crate::flow::RectDecomposition> {
        if let Some(d) = self.decomp.get() {
            return Ok(d);
        }
        let d = crate::flow::rectangle_decomposition(self)?;
        let _ = self.decomp.set(d);
        Ok(self.decomp.get().unwrap())
    }

    pub fn genus(&self) -> usize {
        self.rect.genus()
    }

    /// Cone points as (class id, order) on the engine form.
    pub fn cone_points(&self) -> Vec<(usize, usize)> {
        self.rect.cone_points()
    }

    /// Multiset string like "3^1" or "2^4" (order^count), sorted by order.
    pub fn cone_point_signature(&self) -> String {
        use std::collections::BTreeMap;
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for (_, o) in self.rect.cone_points() {
            *counts.entry(o).or_default() += 1;
        }
        if counts.is_empty() {
            return "-".to_string();
        }
        counts
            .iter()
            .map(|(o, c)| format!("{o}^{c}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn area(&self) -> Scalar {
        self.rect.area()
    }

    pub fn field_d(&self) -> u64 {
        self.rect.field_d().max(self.poly.field_d())
    }
}
