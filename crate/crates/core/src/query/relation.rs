//! Image, preimage and their duals over explicit relations, and exhaustive
//! checkers for conjugate pairs and Galois connections.

use crate::graph::{Relation, Selection};
use crate::lang::Address;

use super::QueryError;

/// Pairs budget for exhaustive checking: `2^|A| * 2^|B|`.
pub const EXHAUSTIVE_BUDGET: u64 = 1 << 12;

fn check_within(s: &Selection, universe: &Selection) -> Result<(), QueryError> {
    match s.first_outside(universe) {
        Some(a) => Err(QueryError::Universe {
            address: a,
            expected: universe.universe(),
        }),
        None => Ok(()),
    }
}

/// `{ y | exists x in X. (x, y) in R }`
pub fn image(r: &Relation, x: &Selection) -> Result<Selection, QueryError> {
    check_within(x, r.left())?;
    let mut out = Selection::empty(r.right().universe());
    for (a, b) in r.pairs() {
        if x.contains(a) {
            out.insert(b);
        }
    }
    Ok(out)
}

/// `{ x | exists y in Y. (x, y) in R }`
pub fn preimage(r: &Relation, y: &Selection) -> Result<Selection, QueryError> {
    check_within(y, r.right())?;
    let mut out = Selection::empty(r.left().universe());
    for (a, b) in r.pairs() {
        if y.contains(b) {
            out.insert(a);
        }
    }
    Ok(out)
}

/// `{ y | no x outside X has (x, y) in R }`, within the right universe.
pub fn dual_image(r: &Relation, x: &Selection) -> Result<Selection, QueryError> {
    check_within(x, r.left())?;
    let excluded = image(r, &r.left().difference(x))?;
    Ok(r.right().difference(&excluded))
}

/// `{ x | no y outside Y has (x, y) in R }`, within the left universe.
pub fn dual_preimage(r: &Relation, y: &Selection) -> Result<Selection, QueryError> {
    check_within(y, r.right())?;
    let excluded = preimage(r, &r.right().difference(y))?;
    Ok(r.left().difference(&excluded))
}

/// A total function between two powerset algebras.
pub struct SelectionFn<'a> {
    pub domain: Selection,
    pub codomain: Selection,
    f: Box<dyn Fn(&Selection) -> Selection + 'a>,
}

impl<'a> SelectionFn<'a> {
    pub fn new(
        domain: Selection,
        codomain: Selection,
        f: impl Fn(&Selection) -> Selection + 'a,
    ) -> Self {
        SelectionFn {
            domain,
            codomain,
            f: Box::new(f),
        }
    }

    /// Wraps a fallible query; inputs are always drawn from `domain`, so a
    /// failure here is a bug in the caller's universes.
    pub fn fallible(
        domain: Selection,
        codomain: Selection,
        f: impl Fn(&Selection) -> Result<Selection, QueryError> + 'a,
    ) -> Self {
        SelectionFn::new(domain, codomain, move |x| {
            f(x).expect("selection inside declared domain")
        })
    }

    pub fn identity(universe: Selection) -> Self {
        SelectionFn::new(universe.clone(), universe, |x| x.clone())
    }

    pub fn apply(&self, x: &Selection) -> Selection {
        (self.f)(x)
    }
}

/// `not . f . not`, complements taken in the respective universes.
pub fn de_morgan_dual(f: SelectionFn<'_>) -> SelectionFn<'_> {
    let domain = f.domain.clone();
    let codomain = f.codomain.clone();
    let (d, c) = (domain.clone(), codomain.clone());
    SelectionFn::new(domain, codomain, move |x| {
        c.difference(&f.apply(&d.difference(x)))
    })
}

/// All subsets of `universe` as bit masks over its members in order.
struct Powerset {
    members: Vec<Address>,
}

impl Powerset {
    fn new(universe: &Selection) -> Self {
        Powerset {
            members: universe.to_vec(),
        }
    }

    fn count(&self) -> u64 {
        1u64 << self.members.len()
    }

    fn subset(&self, mask: u64) -> Selection {
        Selection::from_addresses(
            Default::default(),
            self.members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a),
        )
    }

    fn mask(&self, s: &Selection) -> u64 {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &a)| s.contains(a))
            .fold(0, |m, (i, _)| m | 1 << i)
    }
}

fn budget(f: &SelectionFn<'_>, g: &SelectionFn<'_>) -> Result<(Powerset, Powerset), QueryError> {
    let (a, b) = (Powerset::new(&f.domain), Powerset::new(&g.domain));
    let bits = a.members.len() + b.members.len();
    if bits > 62 || (1u64 << bits) > EXHAUSTIVE_BUDGET {
        return Err(QueryError::Budget {
            bits,
            budget: EXHAUSTIVE_BUDGET,
        });
    }
    Ok((a, b))
}

/// Images of every subset, as masks in the other powerset.
fn tabulate(f: &SelectionFn<'_>, dom: &Powerset, cod: &Powerset) -> Vec<u64> {
    (0..dom.count())
        .map(|m| cod.mask(&f.apply(&dom.subset(m))))
        .collect()
}

/// Whether `f: A -> B` and `g: B -> A` satisfy
/// `f(X) & Y = 0  <=>  X & g(Y) = 0` for every X, Y.
pub fn check_conjugate(f: &SelectionFn<'_>, g: &SelectionFn<'_>) -> Result<bool, QueryError> {
    let (a, b) = budget(f, g)?;
    let fx = tabulate(f, &a, &b);
    let gy = tabulate(g, &b, &a);
    Ok((0..a.count())
        .all(|x| (0..b.count()).all(|y| (fx[x as usize] & y == 0) == (x & gy[y as usize] == 0))))
}

/// Whether `f(X) <= Y  <=>  X <= g(Y)` for every X, Y.
pub fn check_galois(f: &SelectionFn<'_>, g: &SelectionFn<'_>) -> Result<bool, QueryError> {
    let (a, b) = budget(f, g)?;
    let fx = tabulate(f, &a, &b);
    let gy = tabulate(g, &b, &a);
    Ok((0..a.count())
        .all(|x| (0..b.count()).all(|y| (fx[x as usize] & !y == 0) == (x & !gy[y as usize] == 0))))
}

/// Conjugacy restricted to the given pairs of subsets.
pub fn check_conjugate_on(
    f: &SelectionFn<'_>,
    g: &SelectionFn<'_>,
    pairs: &[(Selection, Selection)],
) -> bool {
    pairs
        .iter()
        .all(|(x, y)| f.apply(x).is_disjoint(y) == x.is_disjoint(&g.apply(y)))
}

/// Galois condition restricted to the given pairs of subsets.
pub fn check_galois_on(
    f: &SelectionFn<'_>,
    g: &SelectionFn<'_>,
    pairs: &[(Selection, Selection)],
) -> bool {
    pairs
        .iter()
        .all(|(x, y)| f.apply(x).is_subset(y) == x.is_subset(&g.apply(y)))
}

/// Whether two functions agree on every subset of the shared domain.
pub fn agree_exhaustively(f: &SelectionFn<'_>, g: &SelectionFn<'_>) -> Result<bool, QueryError> {
    let a = Powerset::new(&f.domain);
    if a.members.len() > 20 {
        return Err(QueryError::Budget {
            bits: a.members.len(),
            budget: 1 << 20,
        });
    }
    Ok((0..a.count()).all(|m| {
        let x = a.subset(m);
        f.apply(&x) == g.apply(&x)
    }))
}
