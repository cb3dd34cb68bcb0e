use crate::scenario::RoadLayout;

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

/// A blocking vehicle: center abscissa and lane axis ordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Blocker {
    pub x: f64,
    pub y: f64,
}

impl Blocker {
    pub fn footprint(&self, layout: &RoadLayout) -> Rect {
        let hl = 0.5 * layout.tau;
        let hw = 0.5 * layout.blockage_width;
        Rect {
            x0: self.x - hl,
            x1: self.x + hl,
            y0: self.y - hw,
            y1: self.y + hw,
        }
    }
}

/// Offset of `x` from `origin` on a ring of length `len`, in [-len/2, len/2).
pub fn wrap_rel(x: f64, origin: f64, len: f64) -> f64 {
    let d = (x - origin).rem_euclid(len);
    if d >= 0.5 * len {
        d - len
    } else {
        d
    }
}

/// Whether the closed segment p0–p1 meets the closed rectangle (Liang–Barsky).
pub fn segment_hits_rect(p0: (f64, f64), p1: (f64, f64), rect: &Rect) -> bool {
    let dx = p1.0 - p0.0;
    let dy = p1.1 - p0.1;
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    let checks = [
        (-dx, p0.0 - rect.x0),
        (dx, rect.x1 - p0.0),
        (-dy, p0.1 - rect.y0),
        (dy, rect.y1 - p0.1),
    ];
    for (p, q) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
            if t0 > t1 {
                return false;
            }
        }
    }
    true
}

/// True iff the user–BS segment meets no blocker footprint.
pub fn is_los(user: (f64, f64), bs: (f64, f64), blockers: &[Blocker], layout: &RoadLayout) -> bool {
    !blockers
        .iter()
        .any(|b| segment_hits_rect(user, bs, &b.footprint(layout)))
}

/// Blockers of one lane as sorted abscissae relative to the user, for
/// logarithmic-time occlusion queries from the origin.
#[derive(Debug, Clone)]
pub struct LaneIndex {
    pub y: f64,
    pub xs: Vec<f64>,
}

impl LaneIndex {
    pub fn new(y: f64, mut xs: Vec<f64>) -> Self {
        xs.sort_by(f64::total_cmp);
        LaneIndex { y, xs }
    }

    /// Whether a footprint in this lane meets the segment from the origin to
    /// (bx, by).
    pub fn blocks(&self, bx: f64, by: f64, half_len: f64, half_width: f64) -> bool {
        let (ylo, yhi) = (self.y - half_width, self.y + half_width);
        let (smin, smax) = if by >= 0.0 { (0.0, by) } else { (by, 0.0) };
        let lo_y = ylo.max(smin);
        let hi_y = yhi.min(smax);
        if lo_y > hi_y || by == 0.0 {
            return false;
        }
        let xa = bx * lo_y / by;
        let xb = bx * hi_y / by;
        let (lo, hi) = if xa <= xb { (xa, xb) } else { (xb, xa) };
        let first = self.xs.partition_point(|&c| c < lo - half_len);
        first < self.xs.len() && self.xs[first] <= hi + half_len
    }
}
