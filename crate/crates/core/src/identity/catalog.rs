use std::fmt;
use std::str::FromStr;

use crate::analytic::validate_modulus;
use crate::error::{Error, Result};
use crate::exact_arith::{divisors, RootOfUnity};

/// The translation identities in the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    Ramaswami2,
    Ramaswami3,
    Ramaswami6,
    ApostolK,
    ApostolMobius,
    TransMain,
    TransEuler,
    TransAlt,
    TransAdd,
    TransSub,
    MobiusAlt,
    Mobius,
    MobiusSub,
    MobiusK3,
    TaHalf,
    GcdFree,
    AltEven,
    AltOdd,
    ZetaSeries,
}

/// Which root of unity an identity admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum RootRule {
    Any,
    NonTrivial,
    One,
    MinusOne,
    Ignored,
}

/// Which moduli an identity admits, on top of `k ≡ 1 (mod q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ModulusRule {
    AtLeastTwo,
    AboveTwo,
    OddAboveTwo,
    Fixed(u64),
    Ignored,
}

impl IdentityId {
    pub const ALL: [IdentityId; 19] = [
        IdentityId::Ramaswami2,
        IdentityId::Ramaswami3,
        IdentityId::Ramaswami6,
        IdentityId::ApostolK,
        IdentityId::ApostolMobius,
        IdentityId::TransMain,
        IdentityId::TransEuler,
        IdentityId::TransAlt,
        IdentityId::TransAdd,
        IdentityId::TransSub,
        IdentityId::MobiusAlt,
        IdentityId::Mobius,
        IdentityId::MobiusSub,
        IdentityId::MobiusK3,
        IdentityId::TaHalf,
        IdentityId::GcdFree,
        IdentityId::AltEven,
        IdentityId::AltOdd,
        IdentityId::ZetaSeries,
    ];

    /// Lowercase hyphenated name, as used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Ramaswami2 => "ramaswami-2",
            IdentityId::Ramaswami3 => "ramaswami-3",
            IdentityId::Ramaswami6 => "ramaswami-6",
            IdentityId::ApostolK => "apostol-k",
            IdentityId::ApostolMobius => "apostol-mobius",
            IdentityId::TransMain => "trans-main",
            IdentityId::TransEuler => "trans-euler",
            IdentityId::TransAlt => "trans-alt",
            IdentityId::TransAdd => "trans-add",
            IdentityId::TransSub => "trans-sub",
            IdentityId::MobiusAlt => "mobius-alt",
            IdentityId::Mobius => "mobius",
            IdentityId::MobiusSub => "mobius-sub",
            IdentityId::MobiusK3 => "mobius-k3",
            IdentityId::TaHalf => "ta-half",
            IdentityId::GcdFree => "gcd-free",
            IdentityId::AltEven => "alt-even",
            IdentityId::AltOdd => "alt-odd",
            IdentityId::ZetaSeries => "zeta-series",
        }
    }

    /// Parameter constraints in words.
    pub fn predicate(self) -> &'static str {
        match self {
            IdentityId::Ramaswami2 => "z=1, k=2 fixed",
            IdentityId::Ramaswami3 => "z=1, k=3 fixed",
            IdentityId::Ramaswami6 => "z=1, k=6 fixed",
            IdentityId::ApostolK => "z=1, k≥2",
            IdentityId::ApostolMobius => "z=1, k>2",
            IdentityId::TransMain
            | IdentityId::TransAlt
            | IdentityId::TransAdd
            | IdentityId::TransSub
            | IdentityId::MobiusAlt
            | IdentityId::Mobius
            | IdentityId::MobiusSub => "k≥2, k≡1 (mod q)",
            IdentityId::TransEuler => "q≥2, k≥2, k≡1 (mod q)",
            IdentityId::MobiusK3 => "z=1, k=3 fixed",
            IdentityId::TaHalf => "k>2, k≡1 (mod q)",
            IdentityId::GcdFree => "k≥2, k≡1 (mod q); q odd when k is even",
            IdentityId::AltEven | IdentityId::AltOdd => "z=−1, k odd, k>2",
            IdentityId::ZetaSeries => "no parameters",
        }
    }

    /// The identity as `LHS = RHS`, with `S(s) = Σ_{h<k} z^h h^{-s}`, `δ = [q = 1]`.
    pub fn formula(self) -> &'static str {
        match self {
            IdentityId::Ramaswami2 => "ζ(s)(1−2^{1−s}) = Σ_{m≥1} P_m(s)ζ(s+m)2^{-(s+m)}",
            IdentityId::Ramaswami3 => "ζ(s)(1−3^{1−s}) = 1 + 2Σ_{n≥1} P_{2n}(s)ζ(s+2n)3^{-(s+2n)}",
            IdentityId::Ramaswami6 => {
                "ζ(s)(1−2^{-s}−3^{-s}−6^{-s}) = 1 + 2Σ_{n≥1} P_{2n}(s)ζ(s+2n)6^{-(s+2n)}"
            }
            IdentityId::ApostolK => {
                "ζ(s)(1−k^{1−s}) = Σ_{m≥1} P_m(s)ζ(s+m)k^{-(s+m)}(B_{m+1}(k)−B_{m+1})/(m+1)"
            }
            IdentityId::ApostolMobius => {
                "ζ(s)Σ_{d|k}μ(d)d^{-s} = φ(−s,k) + 2Σ_{n≥0} P_{2n}(s)ζ(s+2n)k^{-(s+2n)}φ(2n,k)"
            }
            IdentityId::TransMain => {
                "Li_z(s)(1−k^{δ−s}) = Σ_{m≥1} P_m(s)Li_z(s+m)k^{-(s+m)} Σ_{h<k} z^{-h}h^m"
            }
            IdentityId::TransEuler => {
                "Li_z(s)(1−k^{-s}) = (1/q)Σ_{m≥1} P_m(s)Li_z(s+m)k^{-(s+m)} Σ_{j<q} (z^j−1)/(z^j(z−1))·(E_{q,m}(j)−E_{q,m}(k+j−1))"
            }
            IdentityId::TransAlt => {
                "Li_z(s)(1−k^{δ−s}) = S(s) + Σ_{m≥1} (−1)^m P_m(s)Li_z(s+m)k^{-(s+m)} Σ_{h<k} z^h h^m"
            }
            IdentityId::TransAdd => {
                "2Li_z(s)(1−k^{δ−s}) = S(s) + Σ_{m≥1} P_m(s)Li_z(s+m)k^{-(s+m)} Σ_{h<k} (z^h(−1)^m + z^{-h})h^m"
            }
            IdentityId::TransSub => {
                "0 = S(s) + Σ_{m≥1} P_m(s)Li_z(s+m)k^{-(s+m)} Σ_{h<k} (z^h(−1)^m − z^{-h})h^m"
            }
            IdentityId::MobiusAlt => {
                "Σ_{d|k}μ(d)d^{-s}Li_{z^d}(s) = Σ' z^h h^{-s} + Σ_{m≥0} (−1)^m P_m(s)Li_z(s+m)k^{-(s+m)} Σ' z^h h^m, Σ' over h≤k coprime to k"
            }
            IdentityId::Mobius => {
                "Σ_{d|k}μ(d)d^{-s}Li_{z^d}(s) = Σ_{m≥0} P_m(s)Li_z(s+m)k^{-(s+m)} Σ' z^{-h}h^m, Σ' over h≤k coprime to k"
            }
            IdentityId::MobiusSub => {
                "0 = Σ' z^h h^{-s} + Σ_{m≥0} P_m(s)Li_z(s+m)k^{-(s+m)} Σ' (z^h(−1)^m − z^{-h})h^m, Σ' over h≤k coprime to k"
            }
            IdentityId::MobiusK3 => "ζ(s)(1−3^{1−s}) = Σ_{m≥1} P_m(s)ζ(s+m)3^{-(s+m)}(1+2^m)",
            IdentityId::TaHalf => {
                "Σ_{d|k}μ(d)d^{-s}Li_{z^d}(s) = Σ'' z^h h^{-s} + Σ_{m≥0} P_m(s)Li_z(s+m)k^{-(s+m)} Σ'' (z^h(−1)^m + z^{-h})h^m, Σ'' over h≤k/2 coprime to k"
            }
            IdentityId::GcdFree => {
                "Li_z(s)(1−k^{-s}) + [k even]k^{-s}z^{k/2}φ(s,1/2,z) = Σ_{h≤k/2} z^h h^{-s} + Σ_{m≥0} P_m(s)Li_z(s+m)k^{-(s+m)} Σ_{h≤k/2} (z^h(−1)^m + z^{-h})h^m"
            }
            IdentityId::AltEven => {
                "2Li_{−1}(s)(1−k^{-s}) = T(−s,k) + 2Σ_{m≥1} P_{2m}(s)Li_{−1}(s+2m)k^{-(s+2m)}T(2m,k)"
            }
            IdentityId::AltOdd => {
                "T(−s,k) = 2Σ_{m≥1} P_{2m−1}(s)Li_{−1}(s+2m−1)k^{-(s+2m−1)}T(2m−1,k)"
            }
            IdentityId::ZetaSeries => "−3/16 = Σ_{m≥1} m 3^{-(2m+1)} ζ(2m+1)(2^{2m−1}−1)(2^{−2m}−1)",
        }
    }

    pub(crate) fn root_rule(self) -> RootRule {
        match self {
            IdentityId::Ramaswami2
            | IdentityId::Ramaswami3
            | IdentityId::Ramaswami6
            | IdentityId::ApostolK
            | IdentityId::ApostolMobius
            | IdentityId::MobiusK3 => RootRule::One,
            IdentityId::TransEuler => RootRule::NonTrivial,
            IdentityId::AltEven | IdentityId::AltOdd => RootRule::MinusOne,
            IdentityId::ZetaSeries => RootRule::Ignored,
            _ => RootRule::Any,
        }
    }

    pub(crate) fn modulus_rule(self) -> ModulusRule {
        match self {
            IdentityId::Ramaswami2 => ModulusRule::Fixed(2),
            IdentityId::Ramaswami3 | IdentityId::MobiusK3 => ModulusRule::Fixed(3),
            IdentityId::Ramaswami6 => ModulusRule::Fixed(6),
            IdentityId::ApostolMobius | IdentityId::TaHalf => ModulusRule::AboveTwo,
            IdentityId::AltEven | IdentityId::AltOdd => ModulusRule::OddAboveTwo,
            IdentityId::ZetaSeries => ModulusRule::Ignored,
            _ => ModulusRule::AtLeastTwo,
        }
    }

    /// Parameters used when the caller gives none: `(q, j, k)`.
    pub fn default_params(self) -> (u64, u64, u64) {
        match self {
            IdentityId::Ramaswami2 => (1, 0, 2),
            IdentityId::Ramaswami3 | IdentityId::MobiusK3 | IdentityId::ZetaSeries => (1, 0, 3),
            IdentityId::Ramaswami6 => (1, 0, 6),
            IdentityId::ApostolK => (1, 0, 5),
            IdentityId::ApostolMobius => (1, 0, 10),
            IdentityId::TransEuler => (3, 1, 4),
            IdentityId::AltEven | IdentityId::AltOdd => (2, 1, 5),
            IdentityId::TaHalf => (3, 1, 7),
            IdentityId::GcdFree => (3, 1, 4),
            _ => (3, 1, 4),
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown identity '{s}'")))
    }
}

/// `(id, predicate)` for every identity, in catalog order.
pub fn list_identities() -> Vec<(IdentityId, &'static str)> {
    IdentityId::ALL.iter().map(|&id| (id, id.predicate())).collect()
}

/// A cataloged identity with validated parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityInstance {
    id: IdentityId,
    z: RootOfUnity,
    k: u64,
    divisors: Vec<u64>,
    terms: Option<u64>,
}

impl IdentityInstance {
    pub fn id(&self) -> IdentityId {
        self.id
    }

    pub fn root(&self) -> RootOfUnity {
        self.z
    }

    pub fn q(&self) -> u64 {
        self.z.order()
    }

    pub fn j(&self) -> u64 {
        self.z.exponent()
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn delta(&self) -> u64 {
        self.z.delta()
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    /// Fixed term count for the series of `zeta-series`; `None` runs it to full precision.
    pub fn terms(&self) -> Option<u64> {
        self.terms
    }

    pub fn with_terms(mut self, terms: u64) -> Self {
        self.terms = Some(terms);
        self
    }
}

impl fmt::Display for IdentityInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (q={}, j={}, k={})", self.id, self.q(), self.j(), self.k)
    }
}

fn bad_modulus(id: IdentityId, k: u64, reason: impl Into<String>) -> Error {
    Error::InvalidModulus {
        k,
        context: id.name().into(),
        reason: reason.into(),
    }
}

/// Validates `(q, j, k)` against the identity's predicate; `z = 1` is stored as `(1, 0)`.
pub fn instantiate(id: IdentityId, q: u64, j: u64, k: u64) -> Result<IdentityInstance> {
    if id.root_rule() == RootRule::Ignored {
        let (q, j, k) = id.default_params();
        return Ok(IdentityInstance {
            id,
            z: RootOfUnity::new(q, j)?,
            k,
            divisors: divisors(k),
            terms: None,
        });
    }
    let z = RootOfUnity::new(q, j)?;
    match id.root_rule() {
        RootRule::One if !z.is_one() => {
            return Err(Error::Domain(format!("{id} requires z = 1 (got {z})")));
        }
        RootRule::MinusOne if z != RootOfUnity::minus_one() => {
            return Err(Error::Domain(format!("{id} requires z = −1 (got {z})")));
        }
        RootRule::NonTrivial if z.is_one() => {
            return Err(Error::Domain(format!("{id} requires q ≥ 2")));
        }
        _ => {}
    }
    match id.modulus_rule() {
        ModulusRule::Fixed(fixed) if k != fixed => {
            return Err(bad_modulus(id, k, format!("k is fixed at {fixed}")));
        }
        ModulusRule::AboveTwo if k <= 2 => return Err(bad_modulus(id, k, "k must exceed 2")),
        ModulusRule::OddAboveTwo if k <= 2 || k.is_multiple_of(2) => {
            return Err(bad_modulus(id, k, "k must be odd and exceed 2"));
        }
        _ => {}
    }
    validate_modulus(k, z.order(), id.name())?;
    if id == IdentityId::GcdFree && k.is_multiple_of(2) && z.order() % 2 == 0 {
        return Err(bad_modulus(id, k, "even k needs odd q"));
    }
    Ok(IdentityInstance {
        id,
        z,
        k,
        divisors: divisors(k),
        terms: None,
    })
}

/// Valid `(q, j, k)` triples with `q ≤ q_max`, `k ≤ k_max`.
pub fn valid_params(id: IdentityId, q_max: u64, k_max: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    if id.root_rule() == RootRule::Ignored {
        out.push(id.default_params());
        return out;
    }
    for q in 1..=q_max {
        for j in 0..q {
            for k in 2..=k_max {
                if instantiate(id, q, j, k).is_ok() && (q > 1 || j == 0) {
                    out.push((q, j, k));
                }
            }
        }
    }
    out
}

/// The parameter grid exercised by `verify_all`: for each order `q ≤ 6`, the
/// extreme exponents `j ∈ {1, q−1}` against the smallest and largest valid `k ≤ 13`.
pub fn default_grid(id: IdentityId) -> Vec<IdentityInstance> {
    let all = valid_params(id, 6, 13);
    let mut out: Vec<IdentityInstance> = Vec::new();
    for q in 1..=6u64 {
        let exps: Vec<u64> = if q == 1 { vec![0] } else { vec![1, q - 1] };
        for j in exps {
            let ks: Vec<u64> = all
                .iter()
                .filter(|p| p.0 == q && p.1 == j)
                .map(|p| p.2)
                .collect();
            let (Some(&lo), Some(&hi)) = (ks.first(), ks.last()) else {
                continue;
            };
            let span: &[u64] = if j == 1 || q == 1 { &[lo, hi] } else { &[lo] };
            for &k in span {
                let inst = instantiate(id, q, j, k).expect("filtered valid");
                if !out.contains(&inst) {
                    out.push(inst);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instantiate_examples() {
        let inst = instantiate(IdentityId::TransMain, 3, 1, 4).unwrap();
        assert_eq!((inst.q(), inst.j(), inst.k()), (3, 1, 4));
        assert!(matches!(
            instantiate(IdentityId::TransMain, 3, 1, 5),
            Err(Error::InvalidModulus { k: 5, .. })
        ));
        assert!(matches!(
            instantiate(IdentityId::TaHalf, 1, 0, 2),
            Err(Error::InvalidModulus { k: 2, .. })
        ));
        assert!(matches!(
            instantiate(IdentityId::TransMain, 4, 2, 5),
            Err(Error::NotPrimitiveRoot { q: 4, j: 2 })
        ));
    }

    #[test]
    fn z_one_is_normalised() {
        let inst = instantiate(IdentityId::TransMain, 1, 7, 3).unwrap();
        assert_eq!((inst.q(), inst.j()), (1, 0));
        assert_eq!(inst.delta(), 1);
        assert_eq!(inst.divisors(), &[1, 3]);
    }

    #[test]
    fn forced_roots_and_moduli() {
        assert!(instantiate(IdentityId::Ramaswami2, 2, 1, 2).is_err());
        assert!(instantiate(IdentityId::Ramaswami2, 1, 0, 3).is_err());
        assert!(instantiate(IdentityId::TransEuler, 1, 0, 3).is_err());
        assert!(instantiate(IdentityId::AltEven, 2, 1, 4).is_err());
        assert!(instantiate(IdentityId::AltOdd, 4, 1, 5).is_err());
        assert!(instantiate(IdentityId::AltOdd, 2, 1, 5).is_ok());
        assert!(instantiate(IdentityId::ApostolMobius, 1, 0, 2).is_err());
        assert!(instantiate(IdentityId::GcdFree, 3, 1, 4).is_ok());
        assert!(instantiate(IdentityId::GcdFree, 1, 0, 2).is_ok());
    }

    #[test]
    fn zeta_series_ignores_parameters() {
        let a = instantiate(IdentityId::ZetaSeries, 5, 2, 11).unwrap();
        let b = instantiate(IdentityId::ZetaSeries, 1, 0, 0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn catalog_listing() {
        let list = list_identities();
        assert_eq!(list.len(), 19);
        assert!(list.contains(&(IdentityId::Ramaswami2, "z=1, k=2 fixed")));
        assert!(list.contains(&(IdentityId::TaHalf, "k>2, k≡1 (mod q)")));
        for (id, _) in list {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
            let (q, j, k) = id.default_params();
            instantiate(id, q, j, k).unwrap();
        }
        assert_eq!("TRANS_MAIN".parse::<IdentityId>().unwrap(), IdentityId::TransMain);
        assert!("trans-nope".parse::<IdentityId>().is_err());
    }

    #[test]
    fn grid_covers_range() {
        let mut qs = std::collections::BTreeSet::new();
        let mut ks = std::collections::BTreeSet::new();
        for id in IdentityId::ALL {
            let grid = default_grid(id);
            assert!(!grid.is_empty(), "{id}");
            for inst in grid {
                assert!(inst.q() <= 6 && inst.k() <= 13);
                qs.insert(inst.q());
                ks.insert(inst.k());
            }
        }
        assert_eq!(qs.len(), 6);
        assert!(ks.contains(&2) && ks.contains(&13));
    }
}
