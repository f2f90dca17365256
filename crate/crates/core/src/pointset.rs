//! Planar point configurations: triangular lattices with reuse colorings,
//! Matérn type-II hardcore samples, and the geometric queries the verifier
//! needs.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        self.x.total_cmp(&other.x).then(self.y.total_cmp(&other.y))
    }
}

/// Axis-aligned rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        ensure(
            [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) && x_min < x_max && y_min < y_max,
            || format!("degenerate window [{x_min}, {x_max}] × [{y_min}, {y_max}]"),
        )?;
        Ok(Window { x_min, x_max, y_min, y_max })
    }

    /// Square of side `2 * half_width` centered at the origin.
    pub fn centered(half_width: f64) -> Result<Self> {
        Window::new(-half_width, half_width, -half_width, half_width)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point {
        Point::new(0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    /// Grows (or, for negative `by`, shrinks) every side by `by`.
    pub fn inflate(&self, by: f64) -> Result<Self> {
        Window::new(self.x_min - by, self.x_max + by, self.y_min - by, self.y_max + by)
    }
}

/// A finite BS sample with scheduling marks in `1..=k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedPointSet {
    points: Vec<Point>,
    marks: Vec<u32>,
    window: Window,
    k: u32,
    // (i, j) lattice coordinates, present for lattice-generated sets.
    lattice_index: Option<Vec<(i64, i64)>>,
}

impl MarkedPointSet {
    pub fn new(points: Vec<Point>, marks: Vec<u32>, window: Window, k: u32) -> Result<Self> {
        ensure(k >= 1, || "K must be positive".into())?;
        ensure(points.len() == marks.len(), || {
            format!("{} points but {} marks", points.len(), marks.len())
        })?;
        ensure(marks.iter().all(|&m| (1..=k).contains(&m)), || {
            format!("marks must lie in 1..={k}")
        })?;
        ensure(points.iter().all(|p| window.contains(p)), || "point outside window".into())?;
        Ok(MarkedPointSet { points, marks, window, k, lattice_index: None })
    }

    /// Single-class set (all marks 1).
    pub fn unmarked(points: Vec<Point>, window: Window) -> Result<Self> {
        let marks = vec![1; points.len()];
        MarkedPointSet::new(points, marks, window, 1)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn marks(&self) -> &[u32] {
        &self.marks
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lattice_index(&self) -> Option<&[(i64, i64)]> {
        self.lattice_index.as_deref()
    }

    /// Points carrying `mark`.
    pub fn class(&self, mark: u32) -> impl Iterator<Item = &Point> + '_ {
        self.points.iter().zip(&self.marks).filter(move |(_, &m)| m == mark).map(|(p, _)| p)
    }

    /// Writes `x,y,mark` rows with a header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "mark"])?;
        for (p, m) in self.points.iter().zip(&self.marks) {
            w.serialize((p.x, p.y, m))?;
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }

    /// Reads `x,y,mark` rows. `K` is the largest mark seen (1 for an empty file).
    pub fn read_csv<R: Read>(input: R, window: Window) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            x: f64,
            y: f64,
            mark: u32,
        }
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["x", "y", "mark"] {
            return Err(Error::Csv(format!("expected header x,y,mark, got {headers:?}")));
        }
        let mut points = Vec::new();
        let mut marks = Vec::new();
        for row in rdr.deserialize() {
            let row: Row = row?;
            points.push(Point::new(row.x, row.y));
            marks.push(row.mark);
        }
        let k = marks.iter().copied().max().unwrap_or(1);
        MarkedPointSet::new(points, marks, window, k)
    }
}

/// Hardcore regulation parameters: same-mark points are at least `2 * h_k` apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardcoreSpec {
    pub k: u32,
    pub h_k: f64,
}

impl HardcoreSpec {
    pub fn new(k: u32, h_k: f64) -> Result<Self> {
        ensure(k >= 1, || "K must be positive".into())?;
        ensure(h_k > 0.0 && h_k.is_finite(), || format!("H_K must be positive, got {h_k}"))?;
        Ok(HardcoreSpec { k, h_k })
    }

    /// Validates a family `(K, H_K)` for one process: sorted by `K`, `H_K`
    /// must not decrease.
    pub fn family(pairs: &[(u32, f64)]) -> Result<Vec<Self>> {
        let mut specs = pairs
            .iter()
            .map(|&(k, h)| HardcoreSpec::new(k, h))
            .collect::<Result<Vec<_>>>()?;
        specs.sort_by_key(|s| s.k);
        ensure(specs.windows(2).all(|w| w[0].k < w[1].k), || "duplicate K in family".into())?;
        ensure(specs.windows(2).all(|w| w[0].h_k <= w[1].h_k), || {
            "H_K must be non-decreasing in K".into()
        })?;
        Ok(specs)
    }
}

/// Frequency-reuse factors with a built-in lattice coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reuse {
    One,
    Three,
    Four,
}

impl Reuse {
    pub const ALL: [Reuse; 3] = [Reuse::One, Reuse::Three, Reuse::Four];

    pub fn k(self) -> u32 {
        match self {
            Reuse::One => 1,
            Reuse::Three => 3,
            Reuse::Four => 4,
        }
    }
}

impl TryFrom<u32> for Reuse {
    type Error = Error;

    fn try_from(k: u32) -> Result<Self> {
        match k {
            1 => Ok(Reuse::One),
            3 => Ok(Reuse::Three),
            4 => Ok(Reuse::Four),
            other => Err(Error::UnsupportedReuse(other)),
        }
    }
}

/// Triangular lattice `i·u + j·v`, `u = (s, 0)`, `v = (s/2, s√3/2)` with
/// inter-site distance `s = √3·a` for hexagonal cells of edge length `a`.
pub fn triangular_lattice(a: f64, window: Window) -> Result<MarkedPointSet> {
    ensure(a > 0.0 && a.is_finite(), || format!("cell edge must be positive, got {a}"))?;
    let s = 3f64.sqrt() * a;
    let vy = s * 3f64.sqrt() / 2.0;
    let j_min = (window.y_min / vy).floor() as i64 - 1;
    let j_max = (window.y_max / vy).ceil() as i64 + 1;

    let mut points = Vec::new();
    let mut index = Vec::new();
    for j in j_min..=j_max {
        let y = j as f64 * vy;
        let shift = j as f64 * s / 2.0;
        let i_min = ((window.x_min - shift) / s).floor() as i64 - 1;
        let i_max = ((window.x_max - shift) / s).ceil() as i64 + 1;
        for i in i_min..=i_max {
            let p = Point::new(i as f64 * s + shift, y);
            if window.contains(&p) {
                points.push(p);
                index.push((i, j));
            }
        }
    }
    let mut set = MarkedPointSet::unmarked(points, window)?;
    set.lattice_index = Some(index);
    Ok(set)
}

/// Applies the reuse-`K` coloring to a lattice from [`triangular_lattice`].
///
/// * K=3: `mark = ((i + 2j) mod 3) + 1`, same-mark spacing `3a`.
/// * K=4: `mark = 2(i mod 2) + (j mod 2) + 1`, same-mark spacing `2√3·a`.
pub fn color_lattice(lattice: &MarkedPointSet, k: u32) -> Result<MarkedPointSet> {
    let reuse = Reuse::try_from(k)?;
    let index = lattice
        .lattice_index()
        .ok_or_else(|| Error::Config("coloring needs lattice indices".into()))?;
    let marks = index
        .iter()
        .map(|&(i, j)| match reuse {
            Reuse::One => 1,
            Reuse::Three => (i + 2 * j).rem_euclid(3) as u32 + 1,
            Reuse::Four => 2 * i.rem_euclid(2) as u32 + j.rem_euclid(2) as u32 + 1,
        })
        .collect();
    Ok(MarkedPointSet {
        points: lattice.points.clone(),
        marks,
        window: lattice.window,
        k,
        lattice_index: lattice.lattice_index.clone(),
    })
}

/// Matérn type-II hardcore sample.
///
/// A Poisson process of `intensity` is drawn on the window inflated by
/// `hardcore_radius`; each point gets a uniform age and survives iff no
/// younger-aged point lies within `hardcore_radius`. Survivors inside the
/// window are returned, so pairwise distances are at least `hardcore_radius`.
pub fn matern_ii(intensity: f64, hardcore_radius: f64, window: Window, seed: u64) -> Result<MarkedPointSet> {
    ensure(intensity >= 0.0 && intensity.is_finite(), || {
        format!("intensity must be non-negative, got {intensity}")
    })?;
    ensure(hardcore_radius > 0.0 && hardcore_radius.is_finite(), || {
        format!("hardcore radius must be positive, got {hardcore_radius}")
    })?;
    let outer = window.inflate(hardcore_radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mean = intensity * outer.area();
    let n = if mean > 0.0 {
        let poisson = Poisson::new(mean).map_err(|e| Error::Domain(e.to_string()))?;
        poisson.sample(&mut rng) as usize
    } else {
        0
    };
    let mut parents = Vec::with_capacity(n);
    let mut ages = Vec::with_capacity(n);
    for _ in 0..n {
        let x = outer.x_min + rng.random::<f64>() * outer.width();
        let y = outer.y_min + rng.random::<f64>() * outer.height();
        parents.push(Point::new(x, y));
        ages.push(rng.random::<f64>());
    }

    let grid = Grid::build(&parents, &outer, hardcore_radius);
    let r2 = hardcore_radius * hardcore_radius;
    let older = |i: usize, j: usize| (ages[j], j) < (ages[i], i);
    let points = (0..n)
        .filter(|&i| {
            let p = parents[i];
            !grid.neighbors(&p).any(|j| {
                j != i && older(i, j) && {
                    let q = parents[j];
                    let (dx, dy) = (p.x - q.x, p.y - q.y);
                    dx * dx + dy * dy < r2
                }
            })
        })
        .map(|i| parents[i])
        .filter(|p| window.contains(p))
        .collect();
    MarkedPointSet::unmarked(points, window)
}

/// Bucket grid with cells of side `cell`, for radius-`cell` neighbor queries.
struct Grid {
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl Grid {
    fn build(points: &[Point], window: &Window, cell: f64) -> Self {
        let nx = ((window.width() / cell).ceil() as usize).max(1);
        let ny = ((window.height() / cell).ceil() as usize).max(1);
        let mut grid = Grid {
            origin: Point::new(window.x_min, window.y_min),
            cell,
            nx,
            ny,
            buckets: vec![Vec::new(); nx * ny],
        };
        for (i, p) in points.iter().enumerate() {
            let (cx, cy) = grid.cell_of(p);
            grid.buckets[cy * nx + cx].push(i);
        }
        grid
    }

    fn cell_of(&self, p: &Point) -> (usize, usize) {
        let cx = ((p.x - self.origin.x) / self.cell).floor().max(0.0) as usize;
        let cy = ((p.y - self.origin.y) / self.cell).floor().max(0.0) as usize;
        (cx.min(self.nx - 1), cy.min(self.ny - 1))
    }

    fn neighbors(&self, p: &Point) -> impl Iterator<Item = usize> + '_ {
        let (cx, cy) = self.cell_of(p);
        let xs = cx.saturating_sub(1)..=(cx + 1).min(self.nx - 1);
        let ys = cy.saturating_sub(1)..=(cy + 1).min(self.ny - 1);
        ys.flat_map(move |y| xs.clone().map(move |x| y * self.nx + x))
            .flat_map(move |b| self.buckets[b].iter().copied())
    }
}

/// Relative slack granted to distances in [`verify_hardcore`], so lattice
/// sites computed in floating point still meet their exact spacing.
pub const HARDCORE_SLACK: f64 = 1e-12;

/// True iff all distinct same-mark pairs are at least `min_dist` apart
/// (up to [`HARDCORE_SLACK`]).
pub fn verify_hardcore(ps: &MarkedPointSet, min_dist: f64) -> bool {
    let min_dist = min_dist * (1.0 - HARDCORE_SLACK);
    let mut order: Vec<usize> = (0..ps.len()).collect();
    order.sort_by(|&a, &b| ps.points[a].x.total_cmp(&ps.points[b].x));
    for (n, &a) in order.iter().enumerate() {
        let pa = ps.points[a];
        for &b in &order[n + 1..] {
            let pb = ps.points[b];
            if pb.x - pa.x >= min_dist {
                break;
            }
            if ps.marks[a] == ps.marks[b] && pa.distance(&pb) < min_dist {
                return false;
            }
        }
    }
    true
}

/// Smallest distance between distinct points sharing a mark (`∞` if none).
pub fn min_same_mark_distance(ps: &MarkedPointSet) -> f64 {
    let mut best = f64::INFINITY;
    for a in 0..ps.len() {
        for b in a + 1..ps.len() {
            if ps.marks[a] == ps.marks[b] {
                best = best.min(ps.points[a].distance(&ps.points[b]));
            }
        }
    }
    best
}

/// Nearest point to `origin` and its distance; exact ties go to the
/// lexicographically smaller `(x, y)`.
pub fn nearest_point(ps: &MarkedPointSet, origin: Point) -> Result<(Point, f64)> {
    nearest_index(ps, origin, None).map(|i| {
        let p = ps.points[i];
        (p, p.distance(&origin))
    })
}

/// Index of the nearest point, optionally within one mark class.
pub(crate) fn nearest_index(ps: &MarkedPointSet, origin: Point, mark: Option<u32>) -> Result<usize> {
    let mut best: Option<(f64, usize)> = None;
    for (i, p) in ps.points.iter().enumerate() {
        if mark.is_some_and(|m| ps.marks[i] != m) {
            continue;
        }
        let d = p.distance(&origin);
        let better = match best {
            None => true,
            Some((bd, bi)) => d < bd || (d == bd && p.lex_cmp(&ps.points[bi]).is_lt()),
        };
        if better {
            best = Some((d, i));
        }
    }
    best.map(|(_, i)| i).ok_or(Error::EmptySet)
}

/// Number of points (optionally of one mark) in the open ball `b(center, radius)`.
pub fn ball_count(ps: &MarkedPointSet, center: Point, radius: f64, mark: Option<u32>) -> usize {
    ps.points
        .iter()
        .zip(&ps.marks)
        .filter(|(p, &m)| mark.is_none_or(|f| f == m) && p.distance(&center) < radius)
        .count()
}
