//! The groups `PSL(2,q) <= PGL(2,q) <= PΓL(2,q)` and their action on `(q^2-q)/2` points.
//!
//! Elements are pairs `(matrix, k)` standing for `M ∘ φ^k` with `φ` the absolute
//! Frobenius; the matrix is scaled so that its first nonzero entry is 1. Products
//! follow `(M1,k1)(M2,k2) = (M1·φ^k1(M2), k1+k2)`.
//!
//! The point set is modelled as the cyclic subgroups of order `s` of `L = PSL(2,q)`,
//! where `s` is the least odd prime dividing `(q+1)/gcd(2,q-1)`, or `s = 2` when
//! there is none. The normaliser in `L` of such a subgroup is dihedral of order
//! `2(q+1)/gcd(2,q-1)`, so this is the action on cosets of that dihedral group.

use crate::error::{precondition, Error, Result};
use crate::gf::{Fe, Field};
use crate::numtheory;
use num_rational::Ratio;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

pub use crate::numtheory::zsigmondy;

/// Prime powers for which the point action is supported.
pub const SUPPORTED_Q: [u64; 10] = [4, 5, 7, 8, 9, 11, 13, 16, 23, 27];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Flavor {
    Psl,
    Pgl,
    PGammaL,
}

impl Flavor {
    pub fn parse(s: &str) -> Result<Flavor> {
        match s.to_ascii_lowercase().as_str() {
            "psl" => Ok(Flavor::Psl),
            "pgl" => Ok(Flavor::Pgl),
            "pgammal" | "pgaml" | "pΓl" => Ok(Flavor::PGammaL),
            _ => precondition(format!("unknown group flavor '{s}' (expected psl, pgl or pgammal)")),
        }
    }

    fn rank(self) -> u8 {
        match self {
            Flavor::Psl => 0,
            Flavor::Pgl => 1,
            Flavor::PGammaL => 2,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Psl => "PSL",
            Flavor::Pgl => "PGL",
            Flavor::PGammaL => "PGammaL",
        })
    }
}

/// A projective semilinear map `M ∘ φ^frob`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjElem {
    pub m: [Fe; 4],
    pub frob: u32,
}

/// Cycle lengths of a permutation, ascending.
pub type CycleType = Vec<usize>;

pub fn cycle_type_label(ct: &[usize]) -> String {
    ct.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("-")
}

/// Arithmetic in `PΓL(2,q)`.
#[derive(Clone, Debug)]
pub struct Psl2 {
    q: u64,
    p: u64,
    e: u32,
    field: Field,
}

impl Psl2 {
    pub fn new(q: u64) -> Result<Psl2> {
        let (p, e) = numtheory::prime_power(q).ok_or_else(|| Error::Precondition(format!("{q} is not a prime power")))?;
        if q < 2 {
            return precondition("q must be at least 2");
        }
        Ok(Psl2 { q, p, e, field: Field::make(p, e)? })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn field_degree(&self) -> u32 {
        self.e
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `gcd(2, q-1)`.
    pub fn o(&self) -> u64 {
        numtheory::gcd(2, self.q - 1)
    }

    pub fn group_order(&self, flavor: Flavor) -> u64 {
        let base = self.q * self.q * self.q - self.q;
        match flavor {
            Flavor::Psl => base / self.o(),
            Flavor::Pgl => base,
            Flavor::PGammaL => base * self.e as u64,
        }
    }

    pub fn identity(&self) -> ProjElem {
        let f = &self.field;
        ProjElem { m: [f.one(), f.zero(), f.zero(), f.one()], frob: 0 }
    }

    fn canon(&self, m: [Fe; 4]) -> [Fe; 4] {
        let f = &self.field;
        let lead = if m[0].0 != 0 { m[0] } else { m[1] };
        if lead == f.one() {
            return m;
        }
        let inv = f.inv(lead).expect("invertible matrix has a nonzero first row");
        [f.mul(m[0], inv), f.mul(m[1], inv), f.mul(m[2], inv), f.mul(m[3], inv)]
    }

    fn mat_mul(&self, a: &[Fe; 4], b: &[Fe; 4]) -> [Fe; 4] {
        let f = &self.field;
        [
            f.add(f.mul(a[0], b[0]), f.mul(a[1], b[2])),
            f.add(f.mul(a[0], b[1]), f.mul(a[1], b[3])),
            f.add(f.mul(a[2], b[0]), f.mul(a[3], b[2])),
            f.add(f.mul(a[2], b[1]), f.mul(a[3], b[3])),
        ]
    }

    fn frob_mat(&self, m: &[Fe; 4], k: u32) -> [Fe; 4] {
        if k == 0 {
            return *m;
        }
        let f = &self.field;
        [f.frobenius(m[0], k), f.frobenius(m[1], k), f.frobenius(m[2], k), f.frobenius(m[3], k)]
    }

    pub fn det(&self, m: &[Fe; 4]) -> Fe {
        let f = &self.field;
        f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]))
    }

    /// Build an element from a matrix and Frobenius power, normalising the scaling.
    pub fn element(&self, m: [Fe; 4], frob: u32) -> Result<ProjElem> {
        if self.det(&m).0 == 0 {
            return precondition("matrix is singular");
        }
        Ok(ProjElem { m: self.canon(m), frob: frob % self.e })
    }

    /// Element from integer matrix entries (prime-field entries).
    pub fn from_ints(&self, entries: [i64; 4]) -> Result<ProjElem> {
        let f = &self.field;
        self.element(entries.map(|x| f.from_i64(x)), 0)
    }

    /// The Frobenius `x -> x^p` as an element of `PΓL(2,q)`.
    pub fn frobenius(&self) -> ProjElem {
        ProjElem { frob: 1 % self.e, ..self.identity() }
    }

    pub fn mul(&self, x: &ProjElem, y: &ProjElem) -> ProjElem {
        let m = self.mat_mul(&x.m, &self.frob_mat(&y.m, x.frob));
        ProjElem { m: self.canon(m), frob: (x.frob + y.frob) % self.e }
    }

    pub fn inv(&self, x: &ProjElem) -> ProjElem {
        let adj = self.adjugate(&x.m);
        let back = (self.e - x.frob) % self.e;
        ProjElem { m: self.canon(self.frob_mat(&adj, back)), frob: back }
    }

    /// `g x g^-1`.
    pub fn conjugate(&self, g: &ProjElem, x: &ProjElem) -> ProjElem {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    /// Matrix part of `g x g^-1` for linear `x`, given the adjugate of `g.m`.
    fn conjugate_linear(&self, g: &ProjElem, x: &[Fe; 4], gadj: &[Fe; 4]) -> [Fe; 4] {
        let fx = self.frob_mat(x, g.frob);
        self.canon(self.mat_mul(&self.mat_mul(&g.m, &fx), gadj))
    }

    fn adjugate(&self, m: &[Fe; 4]) -> [Fe; 4] {
        let f = &self.field;
        [m[3], f.neg(m[1]), f.neg(m[2]), m[0]]
    }

    pub fn pow(&self, x: &ProjElem, mut n: u64) -> ProjElem {
        let mut acc = self.identity();
        let mut base = *x;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    pub fn order(&self, x: &ProjElem) -> u64 {
        let id = self.identity();
        let mut y = *x;
        let mut k = 1;
        while y != id {
            y = self.mul(&y, x);
            k += 1;
        }
        k
    }

    pub fn in_pgl(&self, x: &ProjElem) -> bool {
        x.frob == 0
    }

    pub fn in_psl(&self, x: &ProjElem) -> bool {
        x.frob == 0 && (self.p == 2 || self.field.is_square(self.det(&x.m)))
    }

    pub fn in_flavor(&self, x: &ProjElem, flavor: Flavor) -> bool {
        match flavor {
            Flavor::Psl => self.in_psl(x),
            Flavor::Pgl => self.in_pgl(x),
            Flavor::PGammaL => true,
        }
    }

    /// All elements of the chosen group, in a fixed enumeration order.
    pub fn elements(&self, flavor: Flavor) -> Vec<ProjElem> {
        let f = &self.field;
        let q = self.q;
        let mut mats = Vec::with_capacity((q * q * q) as usize);
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let m = [f.one(), f.from_index(b), f.from_index(c), f.from_index(d)];
                    if self.det(&m).0 != 0 {
                        mats.push(m);
                    }
                }
            }
        }
        for c in 1..q {
            for d in 0..q {
                mats.push([f.zero(), f.one(), f.from_index(c), f.from_index(d)]);
            }
        }
        let frobs = if flavor == Flavor::PGammaL { self.e } else { 1 };
        let mut out = Vec::with_capacity(mats.len() * frobs as usize);
        for k in 0..frobs {
            for m in &mats {
                let x = ProjElem { m: *m, frob: k };
                if self.in_flavor(&x, flavor) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Whether `h` is closed under products and contains the identity.
    pub fn is_subgroup(&self, h: &[ProjElem]) -> bool {
        let set: HashSet<ProjElem> = h.iter().copied().collect();
        set.contains(&self.identity()) && h.iter().all(|a| h.iter().all(|b| set.contains(&self.mul(a, b))))
    }

    /// The subgroup generated by `gens`.
    pub fn generate(&self, gens: &[ProjElem]) -> Vec<ProjElem> {
        let mut seen: HashSet<ProjElem> = HashSet::new();
        let id = self.identity();
        let mut out = vec![id];
        seen.insert(id);
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for g in gens {
                let y = self.mul(&x, g);
                if seen.insert(y) {
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort();
        out
    }

    pub fn subgroup(&self, kind: SubgroupKind, flavor: Flavor) -> Result<Vec<ProjElem>> {
        let f = &self.field;
        let mut out = Vec::new();
        match kind {
            SubgroupKind::Borel => {
                let frobs = if flavor == Flavor::PGammaL { self.e } else { 1 };
                for k in 0..frobs {
                    for b in 0..self.q {
                        for d in 1..self.q {
                            let x = ProjElem { m: [f.one(), f.from_index(b), f.zero(), f.from_index(d)], frob: k };
                            if self.in_flavor(&x, flavor) {
                                out.push(x);
                            }
                        }
                    }
                }
            }
            SubgroupKind::SylowP => {
                for b in 0..self.q {
                    out.push(ProjElem { m: [f.one(), f.from_index(b), f.zero(), f.one()], frob: 0 });
                }
            }
            SubgroupKind::DiagonalTorus => {
                for d in 1..self.q {
                    let x = ProjElem { m: [f.one(), f.zero(), f.zero(), f.from_index(d)], frob: 0 };
                    if self.in_flavor(&x, flavor) {
                        out.push(x);
                    }
                }
            }
            SubgroupKind::DihedralStabilizer => {
                let act = PermAction::new(self.q)?;
                return Ok(act.stabilizer(flavor, 0));
            }
            SubgroupKind::Order2 => {
                let t = self
                    .elements(flavor)
                    .into_iter()
                    .find(|x| self.order(x) == 2)
                    .ok_or_else(|| Error::Precondition("group has no involution".into()))?;
                return Ok(self.generate(&[t]));
            }
        }
        out.sort();
        Ok(out)
    }

    fn check_normal_pair(&self, big: Flavor, small: Flavor) -> Result<()> {
        if small.rank() > big.rank() {
            return Err(Error::Precondition(format!("{small} is not a normal subgroup of {big}")));
        }
        Ok(())
    }

    /// Frequencies of cycle types over the coset `rep · small`, for `small ⊴ big`.
    pub fn coset_cycle_distribution(
        &self,
        big: Flavor,
        small: Flavor,
        rep: &ProjElem,
        act: &dyn Action,
    ) -> Result<BTreeMap<CycleType, Ratio<u64>>> {
        self.check_normal_pair(big, small)?;
        if !self.in_flavor(rep, big) {
            return precondition("coset representative is not in the larger group");
        }
        let elems = self.elements(small);
        let total = elems.len() as u64;
        let mut counts: BTreeMap<CycleType, u64> = BTreeMap::new();
        for x in &elems {
            let y = self.mul(rep, x);
            *counts.entry(act.cycle_type(&y)).or_insert(0) += 1;
        }
        Ok(counts.into_iter().map(|(k, c)| (k, Ratio::new(c, total))).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SubgroupKind {
    Borel,
    SylowP,
    DihedralStabilizer,
    DiagonalTorus,
    Order2,
}

/// A permutation action of a subgroup of `PΓL(2,q)`.
pub trait Action {
    fn degree(&self) -> usize;
    fn group(&self) -> &Psl2;
    fn permutation(&self, g: &ProjElem) -> Vec<u32>;

    fn fixed_points(&self, g: &ProjElem) -> usize {
        self.permutation(g).iter().enumerate().filter(|(i, &j)| *i == j as usize).count()
    }

    fn cycle_type(&self, g: &ProjElem) -> CycleType {
        cycle_type_of(&self.permutation(g))
    }
}

pub fn cycle_type_of(perm: &[u32]) -> CycleType {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

/// Least odd prime dividing `(q+1)/gcd(2,q-1)`, or 2.
pub fn point_subgroup_order(q: u64) -> u64 {
    let n = (q + 1) / numtheory::gcd(2, q - 1);
    numtheory::prime_factors(n).into_iter().find(|&s| s != 2).unwrap_or(2)
}

/// `PΓL(2,q)` acting by conjugation on the order-`s` subgroups of `PSL(2,q)`.
#[derive(Clone, Debug)]
pub struct PermAction {
    group: Psl2,
    s: u64,
    reps: Vec<[Fe; 4]>,
    lookup: HashMap<[Fe; 4], u32>,
}

impl PermAction {
    pub fn new(q: u64) -> Result<PermAction> {
        if !SUPPORTED_Q.contains(&q) {
            return Err(Error::Unsupported(format!("point action for q = {q}; supported: {SUPPORTED_Q:?}")));
        }
        PermAction::build(Psl2::new(q)?)
    }

    /// Same construction without the whitelist (any prime power `q >= 4`).
    pub fn build(group: Psl2) -> Result<PermAction> {
        let q = group.q;
        if q < 4 {
            return precondition("the point action needs q >= 4");
        }
        let s = point_subgroup_order(q);
        let mut reps = Vec::new();
        let mut lookup = HashMap::new();
        for x in group.elements(Flavor::Psl) {
            if lookup.contains_key(&x.m) || group.order(&x) != s {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(x.m);
            let mut y = x;
            for _ in 1..s {
                lookup.insert(y.m, idx);
                y = group.mul(&y, &x);
            }
        }
        if reps.len() as u64 != (q * q - q) / 2 {
            return Err(Error::IdentityFailed(format!(
                "found {} subgroups of order {s}, expected {}",
                reps.len(),
                (q * q - q) / 2
            )));
        }
        Ok(PermAction { group, s, reps, lookup })
    }

    pub fn subgroup_order(&self) -> u64 {
        self.s
    }

    /// Elements of `flavor` fixing `point`.
    pub fn stabilizer(&self, flavor: Flavor, point: usize) -> Vec<ProjElem> {
        let g = &self.group;
        let rep = self.reps[point];
        g.elements(flavor)
            .into_iter()
            .filter(|x| {
                self.lookup[&g.conjugate_linear(x, &rep, &g.adjugate(&x.m))] == point as u32
            })
            .collect()
    }
}

impl Action for PermAction {
    fn degree(&self) -> usize {
        self.reps.len()
    }

    fn group(&self) -> &Psl2 {
        &self.group
    }

    fn permutation(&self, g: &ProjElem) -> Vec<u32> {
        let adj = self.group.adjugate(&g.m);
        self.reps.iter().map(|r| self.lookup[&self.group.conjugate_linear(g, r, &adj)]).collect()
    }
}

/// A group acting on left cosets of a subgroup.
#[derive(Clone, Debug)]
pub struct CosetAction {
    group: Psl2,
    reps: Vec<ProjElem>,
    lookup: HashMap<ProjElem, u32>,
}

impl CosetAction {
    pub fn new(group: &Psl2, flavor: Flavor, subgroup: &[ProjElem]) -> Result<CosetAction> {
        if !group.is_subgroup(subgroup) {
            return Err(Error::NotSubgroup("coset action needs a subgroup".into()));
        }
        if !subgroup.iter().all(|h| group.in_flavor(h, flavor)) {
            return Err(Error::NotSubgroup(format!("subgroup is not contained in {flavor}")));
        }
        let mut reps = Vec::new();
        let mut lookup = HashMap::new();
        for x in group.elements(flavor) {
            if lookup.contains_key(&x) {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(x);
            for h in subgroup {
                lookup.insert(group.mul(&x, h), idx);
            }
        }
        Ok(CosetAction { group: group.clone(), reps, lookup })
    }
}

impl Action for CosetAction {
    fn degree(&self) -> usize {
        self.reps.len()
    }

    fn group(&self) -> &Psl2 {
        &self.group
    }

    fn permutation(&self, g: &ProjElem) -> Vec<u32> {
        self.reps.iter().map(|r| self.lookup[&self.group.mul(g, r)]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitStats {
    /// Number of orbits.
    pub orbits: usize,
    /// Number of orbits whose length is coprime to `p`.
    pub coprime_orbits: usize,
    pub lengths: Vec<usize>,
}

/// Orbits of the subgroup `h` on the points of `act`.
pub fn orbit_stats(h: &[ProjElem], act: &dyn Action, p: u64) -> Result<OrbitStats> {
    if !act.group().is_subgroup(h) {
        return Err(Error::NotSubgroup("orbit statistics need a subgroup".into()));
    }
    let d = act.degree();
    let perms: Vec<Vec<u32>> = h.iter().map(|g| act.permutation(g)).collect();
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for perm in &perms {
        for (i, &j) in perm.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j as usize));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..d {
        let r = find(&mut parent, i);
        *sizes.entry(r).or_insert(0) += 1;
    }
    let mut lengths: Vec<usize> = sizes.into_values().collect();
    lengths.sort_unstable();
    let coprime_orbits = lengths.iter().filter(|&&l| !(l as u64).is_multiple_of(p)).count();
    Ok(OrbitStats { orbits: lengths.len(), coprime_orbits, lengths })
}

/// Conjugacy-invariant data of an element of `PΓL(2,q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ElementClass {
    pub order: u64,
    pub frob: u32,
    pub in_psl: bool,
    pub in_pgl: bool,
}

impl Psl2 {
    pub fn classify(&self, x: &ProjElem) -> ElementClass {
        ElementClass { order: self.order(x), frob: x.frob, in_psl: self.in_psl(x), in_pgl: self.in_pgl(x) }
    }

    /// Order of the field automorphism induced by an element.
    pub fn frobenius_order(&self, frob: u32) -> u64 {
        (self.e / numtheory::gcd(frob as u64, self.e as u64) as u32) as u64
    }
}

/// Fixed-point count on `(q^2-q)/2` points predicted by the closed-form tables,
/// with a short description of the rule applied. `None` when no rule covers the class.
pub fn predicted_fixed_points(g: &Psl2, c: &ElementClass) -> Option<(u64, &'static str)> {
    let q = g.q;
    let p = g.p;
    let d = (q * q - q) / 2;
    let r = c.order;
    if r == 1 {
        return Some((d, "identity"));
    }
    if !c.in_pgl {
        let r_frob = g.frobenius_order(c.frob);
        if r == r_frob {
            let q0 = numtheory::checked_pow(p, g.e / r as u32)?;
            if r.is_multiple_of(2) {
                if q % 4 == 1 || p == 2 {
                    return Some((0, "field automorphism of even order"));
                }
                return None;
            }
            return Some(((q0 * q0 - q0) / 2, "field automorphism of odd order r: (q0^2-q0)/2"));
        }
        if p == 2 && g.e % 2 == 1 && numtheory::gcd(c.frob as u64, g.e as u64) == 1 {
            return Some((1, "generator of PΓL/PGL for q = 2^odd"));
        }
        return None;
    }
    if p == 2 {
        if r == 2 {
            return Some((q / 2, "involution, q even: q/2"));
        }
        if (q - 1).is_multiple_of(r) {
            return Some((0, "order dividing q-1, q even"));
        }
        if (q + 1).is_multiple_of(r) {
            return Some((1, "order dividing q+1, q even"));
        }
        return None;
    }
    if q % 4 == 3 {
        if c.in_psl {
            if r == 2 {
                return Some(((q + 3) / 2, "involution in L, q = 3 mod 4: (q+3)/2"));
            }
            if (p * (q - 1) / 2).is_multiple_of(r) {
                return Some((0, "order dividing p(q-1)/2 in L, q = 3 mod 4"));
            }
            if q.div_ceil(2).is_multiple_of(r) {
                return Some((1, "order dividing (q+1)/2 in L, q = 3 mod 4"));
            }
            return None;
        }
        if r == 2 {
            return Some(((q - 1) / 2, "involution outside L, q = 3 mod 4: (q-1)/2"));
        }
        if (q + 1).is_multiple_of(r) {
            return Some((1, "order > 2 dividing q+1 outside L (via powers)"));
        }
        if (p * (q - 1)).is_multiple_of(r) {
            return Some((0, "order > 2 dividing p(q-1) outside L (via powers)"));
        }
        return None;
    }
    if r == 2 {
        return if c.in_psl {
            Some(((q - 1) / 2, "involution in L, q = 1 mod 4: (q-1)/2"))
        } else {
            Some(((q + 3) / 2, "involution outside L, q = 1 mod 4: (q+3)/2"))
        };
    }
    if (q + 1).is_multiple_of(r) {
        return Some((1, "order > 2 dividing q+1, q = 1 mod 4"));
    }
    if (p * (q - 1)).is_multiple_of(r) {
        return Some((0, "order > 2 dividing p(q-1), q = 1 mod 4"));
    }
    None
}

/// One row of the fixed-point table: all elements sharing an [`ElementClass`].
#[derive(Clone, Debug, Serialize)]
pub struct FixedPointRow {
    pub class: ElementClass,
    pub count: u64,
    /// Observed fixed-point counts with multiplicities.
    pub observed: BTreeMap<u64, u64>,
    pub predicted: Option<u64>,
    pub rule: Option<&'static str>,
}

impl FixedPointRow {
    pub fn matches(&self) -> bool {
        match self.predicted {
            Some(v) => self.observed.len() == 1 && self.observed.contains_key(&v),
            None => true,
        }
    }
}

/// Classify every element of `flavor` and compare fixed points with the predictions.
pub fn fixed_point_table(act: &PermAction, flavor: Flavor) -> Vec<FixedPointRow> {
    let g = act.group();
    let mut rows: BTreeMap<ElementClass, (u64, BTreeMap<u64, u64>)> = BTreeMap::new();
    for x in g.elements(flavor) {
        let class = g.classify(&x);
        let fp = act.fixed_points(&x) as u64;
        let row = rows.entry(class).or_default();
        row.0 += 1;
        *row.1.entry(fp).or_insert(0) += 1;
    }
    rows.into_iter()
        .map(|(class, (count, observed))| {
            let pred = predicted_fixed_points(g, &class);
            FixedPointRow { class, count, observed, predicted: pred.map(|p| p.0), rule: pred.map(|p| p.1) }
        })
        .collect()
}

/// Exhaustive subgroup facts for small `q`.
#[derive(Clone, Debug, Serialize)]
pub struct SubgroupCensus {
    pub q: u64,
    pub involutions_psl: u64,
    pub involutions_pgl: u64,
    pub pgl_involution_classes: usize,
    pub psl_involution_classes: usize,
    pub dihedral_order: u64,
    pub dihedral_subgroups: usize,
    pub dihedral_single_class: bool,
    /// `|G : N_G(D)|` for `G` = PSL, PGL, PΓL and `D` one dihedral subgroup.
    pub dihedral_normalizer_indices: Vec<(Flavor, u64)>,
    pub borel_self_normalizing: Vec<(Flavor, bool)>,
    /// Orders of `B ∩ B'` over distinct Borel subgroups `B'`.
    pub borel_intersections: Vec<(Flavor, BTreeSet<usize>)>,
}

fn conjugacy_classes_among(g: &Psl2, within: &[ProjElem], set: &[ProjElem]) -> usize {
    let mut remaining: HashSet<ProjElem> = set.iter().copied().collect();
    let mut classes = 0;
    while let Some(&x) = remaining.iter().min() {
        classes += 1;
        for h in within {
            remaining.remove(&g.conjugate(h, &x));
        }
    }
    classes
}

fn normalizer(g: &Psl2, within: &[ProjElem], sub: &[ProjElem]) -> usize {
    let set: HashSet<ProjElem> = sub.iter().copied().collect();
    within.iter().filter(|x| sub.iter().all(|h| set.contains(&g.conjugate(x, h)))).count()
}

pub fn verify_subgroup_census(q: u64) -> Result<SubgroupCensus> {
    if !(4..=11).contains(&q) {
        return Err(Error::Unsupported(format!("exhaustive census is limited to 4 <= q <= 11, got {q}")));
    }
    let g = Psl2::new(q)?;
    let psl = g.elements(Flavor::Psl);
    let pgl = g.elements(Flavor::Pgl);
    let inv_psl: Vec<ProjElem> = psl.iter().copied().filter(|x| g.order(x) == 2).collect();
    let inv_pgl: Vec<ProjElem> = pgl.iter().copied().filter(|x| g.order(x) == 2).collect();
    let pgl_classes = conjugacy_classes_among(&g, &pgl, &inv_pgl);
    let psl_classes = conjugacy_classes_among(&g, &psl, &inv_psl);

    let n = (q + 1) / g.o();
    let mut dihedrals: BTreeSet<Vec<ProjElem>> = BTreeSet::new();
    let mut seen_cyclic: HashSet<ProjElem> = HashSet::new();
    for c in psl.iter().filter(|x| g.order(x) == n) {
        if seen_cyclic.contains(c) {
            continue;
        }
        let cyc = g.generate(&[*c]);
        seen_cyclic.extend(cyc.iter().copied());
        let cinv = g.inv(c);
        for t in &inv_psl {
            if g.conjugate(t, c) == cinv {
                dihedrals.insert(g.generate(&[*c, *t]));
            }
        }
    }
    let first = dihedrals.iter().next().cloned().unwrap_or_default();
    let conjugates: BTreeSet<Vec<ProjElem>> = psl
        .iter()
        .map(|x| {
            let mut v: Vec<ProjElem> = first.iter().map(|h| g.conjugate(x, h)).collect();
            v.sort();
            v
        })
        .collect();
    let single_class = conjugates == dihedrals;

    let mut normalizer_indices = Vec::new();
    for flavor in [Flavor::Psl, Flavor::Pgl, Flavor::PGammaL] {
        let elems = g.elements(flavor);
        let nsize = normalizer(&g, &elems, &first) as u64;
        normalizer_indices.push((flavor, elems.len() as u64 / nsize));
    }

    let mut self_norm = Vec::new();
    let mut intersections = Vec::new();
    for flavor in [Flavor::Psl, Flavor::Pgl] {
        let elems = g.elements(flavor);
        let borel = g.subgroup(SubgroupKind::Borel, flavor)?;
        self_norm.push((flavor, normalizer(&g, &elems, &borel) == borel.len()));
        let bset: HashSet<ProjElem> = borel.iter().copied().collect();
        let mut conj: BTreeSet<Vec<ProjElem>> = BTreeSet::new();
        for x in &elems {
            let mut v: Vec<ProjElem> = borel.iter().map(|h| g.conjugate(x, h)).collect();
            v.sort();
            conj.insert(v);
        }
        let mut sorted_b = borel.clone();
        sorted_b.sort();
        let sizes: BTreeSet<usize> = conj
            .iter()
            .filter(|b| **b != sorted_b)
            .map(|b| b.iter().filter(|x| bset.contains(x)).count())
            .collect();
        intersections.push((flavor, sizes));
    }

    Ok(SubgroupCensus {
        q,
        involutions_psl: inv_psl.len() as u64,
        involutions_pgl: inv_pgl.len() as u64,
        pgl_involution_classes: pgl_classes,
        psl_involution_classes: psl_classes,
        dihedral_order: 2 * n,
        dihedral_subgroups: dihedrals.len(),
        dihedral_single_class: single_class,
        dihedral_normalizer_indices: normalizer_indices,
        borel_self_normalizing: self_norm,
        borel_intersections: intersections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders_match_enumeration() {
        for q in [4u64, 5, 7, 8, 9] {
            let g = Psl2::new(q).unwrap();
            for flavor in [Flavor::Psl, Flavor::Pgl, Flavor::PGammaL] {
                assert_eq!(g.elements(flavor).len() as u64, g.group_order(flavor), "q={q} {flavor}");
            }
        }
        let g = Psl2::new(7).unwrap();
        assert_eq!(g.group_order(Flavor::Psl), 168);
        assert_eq!(g.group_order(Flavor::Pgl), 336);
        assert_eq!(Psl2::new(8).unwrap().group_order(Flavor::PGammaL), 1512);
    }

    #[test]
    fn multiplication_is_associative_with_inverses() {
        let g = Psl2::new(9).unwrap();
        let elems = g.elements(Flavor::PGammaL);
        let id = g.identity();
        for (i, x) in elems.iter().enumerate().step_by(97) {
            assert_eq!(g.mul(x, &g.inv(x)), id);
            let y = &elems[(i * 31 + 7) % elems.len()];
            let z = &elems[(i * 17 + 3) % elems.len()];
            assert_eq!(g.mul(&g.mul(x, y), z), g.mul(x, &g.mul(y, z)));
        }
    }

    #[test]
    fn action_degrees() {
        for q in SUPPORTED_Q {
            if q > 13 {
                continue;
            }
            let act = PermAction::new(q).unwrap();
            assert_eq!(act.degree() as u64, (q * q - q) / 2);
        }
        assert!(matches!(PermAction::new(17), Err(Error::Unsupported(_))));
        assert_eq!(point_subgroup_order(7), 2);
        assert_eq!(point_subgroup_order(8), 3);
        assert_eq!(point_subgroup_order(13), 7);
    }

    #[test]
    fn involution_fixed_points() {
        let act = PermAction::new(7).unwrap();
        let g = act.group();
        let t = g.elements(Flavor::Psl).into_iter().find(|x| g.order(x) == 2).unwrap();
        assert_eq!(act.fixed_points(&t), 5);
        assert_eq!(act.fixed_points(&g.identity()), 21);
        let act8 = PermAction::new(8).unwrap();
        let u = act8.group().from_ints([1, 1, 0, 1]).unwrap();
        assert_eq!(act8.fixed_points(&u), 4);
    }

    #[test]
    fn stabilizer_is_dihedral() {
        let act = PermAction::new(7).unwrap();
        let stab = act.stabilizer(Flavor::Psl, 0);
        assert_eq!(stab.len(), 8);
        assert!(act.group().is_subgroup(&stab));
        let act8 = PermAction::new(8).unwrap();
        assert_eq!(act8.stabilizer(Flavor::Pgl, 3).len(), 18);
        assert_eq!(act8.stabilizer(Flavor::PGammaL, 3).len(), 54);
    }

    #[test]
    fn borel_orbits() {
        let act = PermAction::new(7).unwrap();
        let g = act.group();
        let b = g.subgroup(SubgroupKind::Borel, Flavor::Psl).unwrap();
        assert_eq!(b.len(), 21);
        let st = orbit_stats(&b, &act, 7).unwrap();
        assert_eq!(st.orbits, 1);
        let v = g.subgroup(SubgroupKind::SylowP, Flavor::Psl).unwrap();
        let sv = orbit_stats(&v, &act, 7).unwrap();
        assert_eq!(sv.lengths, vec![7, 7, 7]);
        assert_eq!(sv.coprime_orbits, 0);
        let not_sub = vec![g.identity(), g.from_ints([1, 1, 0, 1]).unwrap()];
        assert!(matches!(orbit_stats(&not_sub, &act, 7), Err(Error::NotSubgroup(_))));
    }

    #[test]
    fn coset_distribution_rejects_non_normal_pairs() {
        let act = PermAction::new(4).unwrap();
        let g = act.group();
        let sigma = g.frobenius();
        let dist = g.coset_cycle_distribution(Flavor::PGammaL, Flavor::Pgl, &sigma, &act).unwrap();
        assert!(dist.keys().any(|ct| !ct.contains(&1)));
        let total: Ratio<u64> = dist.values().copied().sum();
        assert_eq!(total, Ratio::from_integer(1));
        assert!(g.coset_cycle_distribution(Flavor::Psl, Flavor::Pgl, &g.identity(), &act).is_err());
    }

    #[test]
    fn coset_action_matches_point_action() {
        let act = PermAction::new(5).unwrap();
        let g = act.group().clone();
        let stab = act.stabilizer(Flavor::Psl, 0);
        let cos = CosetAction::new(&g, Flavor::Psl, &stab).unwrap();
        assert_eq!(cos.degree(), 10);
        for x in g.elements(Flavor::Psl) {
            assert_eq!(cos.cycle_type(&x), act.cycle_type(&x));
        }
    }

    #[test]
    fn fixed_point_predictions_hold() {
        for q in [4u64, 5, 7, 8, 9, 11, 13] {
            let act = PermAction::new(q).unwrap();
            let table = fixed_point_table(&act, Flavor::PGammaL);
            for row in &table {
                assert!(row.matches(), "q={q} {:?} observed {:?} predicted {:?}", row.class, row.observed, row.predicted);
            }
            let covered = table.iter().filter(|r| r.class.in_pgl && r.predicted.is_some()).count();
            let linear = table.iter().filter(|r| r.class.in_pgl).count();
            assert_eq!(covered, linear, "q={q}: every PGL class has a rule");
        }
    }

    #[test]
    fn census_small_q() {
        let c = verify_subgroup_census(7).unwrap();
        assert_eq!(c.involutions_psl, 21);
        assert_eq!(c.involutions_pgl, 49);
        assert_eq!(c.pgl_involution_classes, 2);
        assert_eq!(c.dihedral_subgroups, 21);
        assert!(c.dihedral_single_class);
        assert!(c.dihedral_normalizer_indices.iter().all(|&(_, i)| i == 21));
        assert!(c.borel_self_normalizing.iter().all(|&(_, b)| b));
        assert_eq!(c.borel_intersections[0].1, [3usize].into_iter().collect());
        assert_eq!(c.borel_intersections[1].1, [6usize].into_iter().collect());
        assert!(verify_subgroup_census(13).is_err());
    }
}
