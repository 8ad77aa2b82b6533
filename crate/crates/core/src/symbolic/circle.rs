use crate::quadratic::QuadSurd;

/// A half-open arc `[left, right)` of the circle R/Z, traversed in the
/// positive direction. Endpoints are kept in `[0, 1)`; `left == right`
/// denotes the empty arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircleInterval {
    left: QuadSurd,
    right: QuadSurd,
}

impl CircleInterval {
    pub fn new(left: QuadSurd, right: QuadSurd) -> Self {
        CircleInterval {
            left: left.fract(),
            right: right.fract(),
        }
    }

    pub fn left(&self) -> QuadSurd {
        self.left
    }

    pub fn right(&self) -> QuadSurd {
        self.right
    }

    /// Length in `[0, 1)`.
    pub fn length(&self) -> QuadSurd {
        (self.right - self.left).fract()
    }

    pub fn translate(&self, t: QuadSurd) -> Self {
        CircleInterval::new(self.left + t, self.right + t)
    }

    pub fn contains(&self, x: QuadSurd) -> bool {
        self.to_arcs().contains(x.fract())
    }

    /// The same set as a union of non-wrapping pieces.
    pub fn to_arcs(&self) -> ArcSet {
        let zero = QuadSurd::zero();
        let one = QuadSurd::one();
        let pieces = match self.left.cmp(&self.right) {
            std::cmp::Ordering::Equal => vec![],
            std::cmp::Ordering::Less => vec![(self.left, self.right)],
            std::cmp::Ordering::Greater => {
                let mut v = Vec::new();
                if self.right > zero {
                    v.push((zero, self.right));
                }
                v.push((self.left, one));
                v
            }
        };
        ArcSet { pieces }
    }
}

/// A finite union of disjoint half-open pieces `[a, b)` with
/// `0 <= a < b <= 1`, sorted by `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcSet {
    pieces: Vec<(QuadSurd, QuadSurd)>,
}

impl ArcSet {
    /// The whole circle.
    pub fn full() -> Self {
        ArcSet {
            pieces: vec![(QuadSurd::zero(), QuadSurd::one())],
        }
    }

    pub fn pieces(&self) -> &[(QuadSurd, QuadSurd)] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn length(&self) -> QuadSurd {
        self.pieces
            .iter()
            .fold(QuadSurd::zero(), |acc, &(a, b)| acc + (b - a))
    }

    pub fn contains(&self, x: QuadSurd) -> bool {
        self.pieces.iter().any(|&(a, b)| a <= x && x < b)
    }

    pub fn intersect(&self, other: &ArcSet) -> ArcSet {
        let mut pieces = Vec::new();
        for &(a, b) in &self.pieces {
            for &(c, d) in &other.pieces {
                let lo = a.max(c);
                let hi = b.min(d);
                if lo < hi {
                    pieces.push((lo, hi));
                }
            }
        }
        pieces.sort();
        ArcSet { pieces }
    }

    pub fn intersect_interval(&self, arc: &CircleInterval) -> ArcSet {
        self.intersect(&arc.to_arcs())
    }
}
