//! Five-band comfort classification of a PMV value.

use std::fmt;
use std::str::FromStr;

/// Thermal sensation band. Band edges are assigned deterministically:
/// ±0.5 belongs to `Comfortable`, ±2 to `Cool`/`Warm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComfortClass {
    Cold,
    Cool,
    Comfortable,
    Warm,
    Hot,
}

impl ComfortClass {
    /// All bands in cold-to-hot order; handy for occupancy accounting.
    pub const ALL: [ComfortClass; 5] = [
        ComfortClass::Cold,
        ComfortClass::Cool,
        ComfortClass::Comfortable,
        ComfortClass::Warm,
        ComfortClass::Hot,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ComfortClass::Cold => "Cold",
            ComfortClass::Cool => "Cool",
            ComfortClass::Comfortable => "Comfortable",
            ComfortClass::Warm => "Warm",
            ComfortClass::Hot => "Hot",
        }
    }

    /// Index into [`ComfortClass::ALL`].
    pub fn index(&self) -> usize {
        match self {
            ComfortClass::Cold => 0,
            ComfortClass::Cool => 1,
            ComfortClass::Comfortable => 2,
            ComfortClass::Warm => 3,
            ComfortClass::Hot => 4,
        }
    }
}

impl fmt::Display for ComfortClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComfortClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Cold" => Ok(ComfortClass::Cold),
            "Cool" => Ok(ComfortClass::Cool),
            "Comfortable" => Ok(ComfortClass::Comfortable),
            "Warm" => Ok(ComfortClass::Warm),
            "Hot" => Ok(ComfortClass::Hot),
            other => Err(format!("unknown comfort class {other:?}")),
        }
    }
}

/// Total classification of a finite PMV value into the five bands.
pub fn classify_comfort(pmv: f64) -> ComfortClass {
    debug_assert!(pmv.is_finite());
    if pmv < -2.0 {
        ComfortClass::Cold
    } else if pmv < -0.5 {
        ComfortClass::Cool
    } else if pmv <= 0.5 {
        ComfortClass::Comfortable
    } else if pmv <= 2.0 {
        ComfortClass::Warm
    } else {
        ComfortClass::Hot
    }
}
