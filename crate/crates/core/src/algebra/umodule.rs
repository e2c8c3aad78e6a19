use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Sub};
use thiserror::Error;

/// (Maslov, Alexander) bigrading.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct Bigrading {
    pub maslov: i32,
    pub alexander: i32,
}

impl Bigrading {
    pub const fn new(maslov: i32, alexander: i32) -> Self {
        Bigrading { maslov, alexander }
    }

    /// Grading of `U^k` times an element of this grading.
    pub fn lowered(self, k: u32) -> Self {
        Bigrading::new(self.maslov - 2 * k as i32, self.alexander - k as i32)
    }

    /// `M - 2A`, preserved by multiplication by any variable.
    pub fn delta(self) -> i32 {
        self.maslov - 2 * self.alexander
    }
}

impl Add for Bigrading {
    type Output = Bigrading;
    fn add(self, o: Bigrading) -> Bigrading {
        Bigrading::new(self.maslov + o.maslov, self.alexander + o.alexander)
    }
}

impl Sub for Bigrading {
    type Output = Bigrading;
    fn sub(self, o: Bigrading) -> Bigrading {
        Bigrading::new(self.maslov - o.maslov, self.alexander - o.alexander)
    }
}

impl fmt::Display for Bigrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.maslov, self.alexander)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Torsion {
    pub at: Bigrading,
    pub order: u32,
}

/// Isomorphism type of a finitely generated bigraded F[U]-module: free
/// summands ("towers") plus cyclic torsion `F[U]/U^k`, both listed by the
/// bigrading of their generator and kept sorted.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct BigradedUModule {
    pub towers: Vec<Bigrading>,
    pub torsion: Vec<Torsion>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("expected exactly one tower, found {0}")]
    TowerCount(usize),
}

impl BigradedUModule {
    pub fn new(mut towers: Vec<Bigrading>, mut torsion: Vec<Torsion>) -> Self {
        towers.sort();
        torsion.sort();
        BigradedUModule { towers, torsion }
    }

    pub fn tower(&self) -> Result<Bigrading, AlgebraError> {
        match self.towers.as_slice() {
            [t] => Ok(*t),
            other => Err(AlgebraError::TowerCount(other.len())),
        }
    }

    /// Dimension over F2 of the bigrading `(m, a)` part.
    pub fn dim_at(&self, at: Bigrading) -> usize {
        let tow = self
            .towers
            .iter()
            .filter(|t| {
                let k = t.alexander - at.alexander;
                k >= 0 && t.lowered(k as u32) == at
            })
            .count();
        let tor = self
            .torsion
            .iter()
            .filter(|t| {
                let k = t.at.alexander - at.alexander;
                k >= 0 && (k as u32) < t.order && t.at.lowered(k as u32) == at
            })
            .count();
        tow + tor
    }

    /// `A (x) B  +  Tor(A, B)` over F[U].
    ///
    /// For generators at `g`, `h` of `F[U]/U^a` and `F[U]/U^b` the product is
    /// `F[U]/U^min(a,b)` at `g+h` and the Tor summand is `F[U]/U^min(a,b)` at
    /// `g + h + (1 - 2max(a,b), -max(a,b))`.
    pub fn tensor_and_tor(&self, other: &BigradedUModule) -> Result<BigradedUModule, AlgebraError> {
        let ta = self.tower()?;
        let tb = other.tower()?;
        let mut torsion = Vec::new();
        for t in &other.torsion {
            torsion.push(Torsion { at: ta + t.at, order: t.order });
        }
        for t in &self.torsion {
            torsion.push(Torsion { at: t.at + tb, order: t.order });
        }
        for s in &self.torsion {
            for t in &other.torsion {
                let lo = s.order.min(t.order);
                let hi = s.order.max(t.order) as i32;
                let sum = s.at + t.at;
                torsion.push(Torsion { at: sum, order: lo });
                torsion.push(Torsion {
                    at: sum + Bigrading::new(1 - 2 * hi, -hi),
                    order: lo,
                });
            }
        }
        Ok(BigradedUModule::new(vec![ta + tb], torsion))
    }
}

impl fmt::Display for BigradedUModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.towers.iter().map(|t| format!("F[U]{t}")).collect();
        parts.extend(self.torsion.iter().map(|t| {
            if t.order == 1 {
                format!("F{}", t.at)
            } else {
                format!("F[U]/U^{}{}", t.order, t.at)
            }
        }));
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}
