//! Classification of symmetric 1-designs: 2-class symmetric designs,
//! biplanes, semi-biplanes, 2-class association schemes and group divisible
//! types.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::design::SetSystem;

/// Parameters `(v,k;λ1,λ2;δ1,δ2)` of a 2-class symmetric design.
///
/// Pairs of points lie in `lambda1` or `lambda2` blocks and pairs of blocks
/// meet in `delta1` or `delta2` points, with `lambda1 <= lambda2` and
/// `delta1 <= delta2`. A symmetric 2-design has `lambda1 == lambda2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoClassParams {
    pub v: usize,
    pub k: usize,
    pub lambda1: usize,
    pub lambda2: usize,
    pub delta1: usize,
    pub delta2: usize,
}

impl TwoClassParams {
    pub fn is_semibiplane(&self) -> bool {
        self.lambda1 == 0 && self.delta1 == 0 && self.lambda2 == 2 && self.delta2 == 2
    }
}

impl fmt::Display for TwoClassParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{};{},{})", self.v, self.k, self.lambda1, self.lambda2, self.delta1, self.delta2)
    }
}

/// Parameters of a 2-class association scheme.
///
/// `p[i-1][j-1][k-1]` is the number of points that are j-th associates of `x`
/// and k-th associates of `y`, for any i-th associates `x, y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SchemeParams {
    pub n1: usize,
    pub n2: usize,
    pub p1: [[usize; 2]; 2],
    pub p2: [[usize; 2]; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GdType {
    NotGd,
    Singular,
    SemiRegular,
    Regular,
}

impl fmt::Display for GdType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GdType::NotGd => "not group divisible",
            GdType::Singular => "singular group divisible",
            GdType::SemiRegular => "semi-regular group divisible",
            GdType::Regular => "regular group divisible",
        })
    }
}

/// Group divisible typing together with the evidence it was based on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GdReport {
    pub kind: GdType,
    /// Associate class (1 or 2) whose relation partitions the points into groups.
    pub group_class: Option<u8>,
    pub group_size: Option<usize>,
    /// `r - λ2 > 0 && rk - vλ1 > 0` evaluated with the class labels as given
    /// (λ1 the smaller pair count).
    pub index_formula_regular: bool,
    /// Whether `index_formula_regular` agrees with `kind == Regular`. The two
    /// only differ when the groups are formed by the first associate class.
    pub conventions_agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Common replication number when the system is a tactical configuration.
    pub replication: Option<usize>,
    /// `Some(k)` when the system is a symmetric 1-(v,k,k) design.
    pub one_design_k: Option<usize>,
    pub two_class: Option<TwoClassParams>,
    /// `Some(λ)` when the system is a symmetric 2-(v,k,λ) design.
    pub symmetric_lambda: Option<usize>,
    pub is_biplane: bool,
    pub is_semibiplane: bool,
    pub scheme: Option<SchemeParams>,
    pub gd: Option<GdReport>,
}

impl Classification {
    pub fn is_tactical(&self) -> bool {
        self.replication.is_some()
    }

    pub fn is_symmetric_2design(&self) -> bool {
        self.symmetric_lambda.is_some()
    }

    pub fn gd_type(&self) -> GdType {
        self.gd.map_or(GdType::NotGd, |g| g.kind)
    }

    /// Short verdict such as `2-(16,6,2) biplane`, `sbp(20,6)` or
    /// `(26,6;1,6;0,2)`.
    pub fn label(&self) -> String {
        match (self.two_class, self.symmetric_lambda) {
            (Some(p), Some(l)) if self.is_biplane => format!("2-({},{},{}) biplane", p.v, p.k, l),
            (Some(p), Some(l)) => format!("2-({},{},{}) symmetric design", p.v, p.k, l),
            (Some(p), None) if self.is_semibiplane => format!("sbp({},{})", p.v, p.k),
            (Some(p), None) => format!("{p}"),
            _ => String::from("not a 2-class symmetric design"),
        }
    }
}

fn values<I: IntoIterator<Item = usize>>(it: I) -> BTreeSet<usize> {
    it.into_iter().collect()
}

/// Classifies a set system; the 2-class taxonomy is only attempted when the
/// system is a symmetric 1-(v,k,k) design.
pub fn classify(s: &SetSystem) -> Classification {
    let replication = s.replication_number();
    let v = s.v();
    let k = s.blocks().first().map(|b| b.len());
    let one_design_k = match (replication, k) {
        (Some(r), Some(k)) if s.len() == v && r == k && s.blocks().iter().all(|b| b.len() == k) => Some(k),
        _ => None,
    };
    let mut c = Classification {
        replication,
        one_design_k,
        two_class: None,
        symmetric_lambda: None,
        is_biplane: false,
        is_semibiplane: false,
        scheme: None,
        gd: None,
    };
    let Some(k) = one_design_k else {
        return c;
    };
    if v < 2 {
        return c;
    }
    let pairs = values(s.pair_coverage_distribution().into_keys());
    let meets = values(s.intersection_distribution().into_keys());
    if pairs.len() > 2 || meets.len() > 2 {
        return c;
    }
    let lo = |set: &BTreeSet<usize>| *set.first().unwrap();
    let hi = |set: &BTreeSet<usize>| *set.last().unwrap();
    let tc = TwoClassParams {
        v,
        k,
        lambda1: lo(&pairs),
        lambda2: hi(&pairs),
        delta1: meets.first().copied().unwrap_or(0),
        delta2: meets.last().copied().unwrap_or(0),
    };
    c.two_class = Some(tc);
    if pairs.len() == 1 {
        c.symmetric_lambda = Some(tc.lambda1);
        c.is_biplane = tc.lambda1 == 2;
        return c;
    }
    let zero_two = values([0, 2]);
    c.is_semibiplane = pairs == zero_two && meets == zero_two;
    c.scheme = association_scheme_params(s, &tc);
    if let Some(scheme) = c.scheme {
        c.gd = Some(gd_type(s, &scheme, &tc));
    }
    c
}

/// `classes[x][y]` in `{1, 2}` for `x != y`: 1 when the pair lies in `lambda1` blocks.
fn associate_classes(s: &SetSystem, tc: &TwoClassParams) -> Vec<Vec<u8>> {
    let counts = s.pair_counts();
    counts
        .iter()
        .enumerate()
        .map(|(x, row)| {
            row.iter()
                .enumerate()
                .map(|(y, &n)| {
                    if x == y {
                        0
                    } else if n as usize == tc.lambda1 {
                        1
                    } else {
                        2
                    }
                })
                .collect()
        })
        .collect()
}

/// Tests whether the two pair classes form a 2-class association scheme by
/// checking the definition directly over all ordered pairs and third points.
pub fn association_scheme_params(s: &SetSystem, tc: &TwoClassParams) -> Option<SchemeParams> {
    if tc.lambda1 == tc.lambda2 {
        return None;
    }
    let v = s.v();
    let cls = associate_classes(s, tc);
    let mut n = [0usize; 2];
    for (x, row) in cls.iter().enumerate() {
        let mut here = [0usize; 2];
        for (y, &c) in row.iter().enumerate() {
            if y != x {
                here[c as usize - 1] += 1;
            }
        }
        if x == 0 {
            n = here;
        } else if here != n {
            return None;
        }
    }
    if n[0] == 0 || n[1] == 0 {
        return None;
    }
    let mut p: [Option<[[usize; 2]; 2]>; 2] = [None, None];
    for x in 0..v {
        for y in 0..v {
            if x == y {
                continue;
            }
            let mut m = [[0usize; 2]; 2];
            for z in 0..v {
                if z != x && z != y {
                    m[cls[x][z] as usize - 1][cls[y][z] as usize - 1] += 1;
                }
            }
            let slot = &mut p[cls[x][y] as usize - 1];
            match slot {
                None => *slot = Some(m),
                Some(prev) if *prev != m => return None,
                _ => {}
            }
        }
    }
    Some(SchemeParams { n1: n[0], n2: n[1], p1: p[0]?, p2: p[1]? })
}

/// Group divisible typing of a 2-class scheme.
///
/// An associate class forms groups when, with reflexivity added, it is an
/// equivalence relation; the class sizes make the groups equal-sized. With
/// `λw` the pair count within groups and `λb` between them: singular iff
/// `r = λw`, semi-regular iff `r > λw` and `rk = vλb`, regular iff `r > λw`
/// and `rk > vλb`.
pub fn gd_type(s: &SetSystem, scheme: &SchemeParams, tc: &TwoClassParams) -> GdReport {
    let v = s.v();
    let r = tc.k;
    let index_formula_regular = r as i64 - tc.lambda2 as i64 > 0 && (r * tc.k) as i64 - (v * tc.lambda1) as i64 > 0;
    let cls = associate_classes(s, tc);
    let mut report = GdReport {
        kind: GdType::NotGd,
        group_class: None,
        group_size: None,
        index_formula_regular,
        conventions_agree: !index_formula_regular,
    };
    for class in [1u8, 2] {
        let ni = if class == 1 { scheme.n1 } else { scheme.n2 };
        if ni == 0 || ni + 1 >= v {
            continue;
        }
        let group_of = |x: usize| -> Vec<usize> { (0..v).filter(|&y| y == x || cls[x][y] == class).collect() };
        let is_partition = (0..v).all(|x| {
            let g = group_of(x);
            g.iter().all(|&y| group_of(y) == g)
        });
        if !is_partition {
            continue;
        }
        let (within, between) = if class == 1 { (tc.lambda1, tc.lambda2) } else { (tc.lambda2, tc.lambda1) };
        let kind = if r == within {
            GdType::Singular
        } else if r > within && r * tc.k == v * between {
            GdType::SemiRegular
        } else if r > within && r * tc.k > v * between {
            GdType::Regular
        } else {
            GdType::NotGd
        };
        report.kind = kind;
        report.group_class = Some(class);
        report.group_size = Some(ni + 1);
        report.conventions_agree = (kind == GdType::Regular) == index_formula_regular;
        break;
    }
    report
}

/// Pair and intersection value sets, used by callers that only need the raw
/// two-class evidence.
pub fn two_class_values(s: &SetSystem) -> (Vec<usize>, Vec<usize>) {
    (s.pair_coverage_distribution().into_keys().collect(), s.intersection_distribution().into_keys().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{develop, double};
    use crate::perm::PermGroup;
    use alloc::vec;

    fn paley() -> SetSystem {
        develop(&[vec![1, 3, 4, 5, 9]], &PermGroup::cyclic(11)).unwrap()
    }

    #[test]
    fn biplane_is_a_degenerate_two_class_design() {
        let c = classify(&paley());
        assert!(c.is_biplane);
        assert!(c.is_symmetric_2design());
        assert!(!c.is_semibiplane);
        let tc = c.two_class.unwrap();
        assert_eq!((tc.lambda1, tc.lambda2, tc.delta1, tc.delta2), (2, 2, 2, 2));
        assert!(c.scheme.is_none());
        assert_eq!(c.gd_type(), GdType::NotGd);
        assert_eq!(c.label(), "2-(11,5,2) biplane");
    }

    #[test]
    fn double_of_paley_is_a_semibiplane() {
        let c = classify(&double(&paley()).unwrap());
        assert!(c.is_semibiplane);
        assert_eq!(c.two_class, Some(TwoClassParams { v: 22, k: 6, lambda1: 0, lambda2: 2, delta1: 0, delta2: 2 }));
        assert_eq!(c.label(), "sbp(22,6)");
    }

    #[test]
    fn non_tactical_system_reports_only_tactical_facts() {
        let s = SetSystem::new(4, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        let c = classify(&s);
        assert!(!c.is_tactical());
        assert!(c.one_design_k.is_none() && c.two_class.is_none());
        assert_eq!(c.label(), "not a 2-class symmetric design");
    }

    #[test]
    fn cyclic_triples_are_not_two_class() {
        let s = SetSystem::new(
            6,
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 5], vec![0, 4, 5], vec![0, 1, 5]],
        )
        .unwrap();
        let c = classify(&s);
        assert_eq!(c.one_design_k, Some(3));
        // pairs at distance 1, 2, 3 lie in 2, 1, 0 blocks
        assert!(c.two_class.is_none());
    }

    /// Edges of K5 with every vertex replaced by two points: a symmetric
    /// (10,4;1,4;0,2) singular group divisible design.
    fn inflated_k5() -> SetSystem {
        let mut blocks = Vec::new();
        for a in 0..5u32 {
            for b in a + 1..5 {
                blocks.push(vec![2 * a, 2 * a + 1, 2 * b, 2 * b + 1]);
            }
        }
        SetSystem::new(10, blocks).unwrap()
    }

    #[test]
    fn inflated_complete_graph_is_singular_gd() {
        let c = classify(&inflated_k5());
        assert_eq!(c.two_class, Some(TwoClassParams { v: 10, k: 4, lambda1: 1, lambda2: 4, delta1: 0, delta2: 2 }));
        let scheme = c.scheme.unwrap();
        assert_eq!((scheme.n1, scheme.n2), (8, 1));
        assert_eq!(scheme.p1, [[6, 1], [1, 0]]);
        assert_eq!(scheme.p2, [[8, 0], [0, 0]]);
        let gd = c.gd.unwrap();
        assert_eq!(gd.kind, GdType::Singular);
        assert_eq!(gd.group_class, Some(2));
        assert_eq!(gd.group_size, Some(2));
        assert!(gd.conventions_agree);
    }
}
