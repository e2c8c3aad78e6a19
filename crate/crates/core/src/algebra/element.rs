use super::Monomial;
use std::fmt;

/// Index of a generator in a complex's generator table.
pub type GenId = u32;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Term {
    pub gen: GenId,
    pub mono: Monomial,
}

impl Term {
    pub fn new(mono: Monomial, gen: GenId) -> Self {
        Term { gen, mono }
    }
}

/// A finite F2-linear combination of `monomial * generator`. Terms are kept
/// sorted and free of duplicates, so equality is structural.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    terms: Vec<Term>,
}

impl ModuleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(gen: GenId) -> Self {
        ModuleElement {
            terms: vec![Term::new(Monomial::one(), gen)],
        }
    }

    pub fn term(mono: Monomial, gen: GenId) -> Self {
        ModuleElement {
            terms: vec![Term::new(mono, gen)],
        }
    }

    /// Sums the given terms; equal terms cancel in pairs.
    pub fn from_terms(mut terms: Vec<Term>) -> Self {
        terms.sort_unstable();
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            if out.last() == Some(&t) {
                out.pop();
            } else {
                out.push(t);
            }
        }
        ModuleElement { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.terms.binary_search(t).is_ok()
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        ModuleElement { terms: out }
    }

    pub fn scale(&self, m: &Monomial) -> ModuleElement {
        if m.is_one() {
            return self.clone();
        }
        // multiplication by a monomial is injective on terms, so no cancellation
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .map(|t| Term::new(t.mono.mul(m), t.gen))
            .collect();
        terms.sort_unstable();
        ModuleElement { terms }
    }

    /// Applies a module map given on generators, with variables renamed by
    /// `subst` on the way.
    pub fn map<F, S>(&self, image: F, subst: S) -> ModuleElement
    where
        F: Fn(GenId) -> ModuleElement,
        S: Fn(crate::Var) -> crate::Var,
    {
        let mut acc = Vec::new();
        for t in &self.terms {
            let m = t.mono.substitute(&subst);
            for s in image(t.gen).terms {
                acc.push(Term::new(s.mono.mul(&m), s.gen));
            }
        }
        ModuleElement::from_terms(acc)
    }

    /// Renames generators (must be injective) and variables.
    pub fn relabel(&self, gen: impl Fn(GenId) -> GenId, var: impl Fn(crate::Var) -> crate::Var) -> ModuleElement {
        ModuleElement::from_terms(
            self.terms
                .iter()
                .map(|t| Term::new(t.mono.substitute(&var), gen(t.gen)))
                .collect(),
        )
    }
}

impl FromIterator<Term> for ModuleElement {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        ModuleElement::from_terms(iter.into_iter().collect())
    }
}

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if !t.mono.is_one() {
                write!(f, "{}", t.mono)?;
            }
            write!(f, "g{}", t.gen)?;
        }
        Ok(())
    }
}
