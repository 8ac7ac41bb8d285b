//! Invariant suite over the built-in fans, driven by fixed seeds.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::document::ProblemDocument;
use crate::fan::builtin::{f1, p1, p1xp1, projective_space};
use crate::fan::Fan;
use crate::jacobian::{integrate_jl, integrate_v, psi_pullback, ExteriorElement, PsiMap};
use crate::linalg::determinant;
use crate::localization::{
    choose_direction, explicit_exponents, explicit_pushforward, linear_relation_class, localize,
    pushforward_class, pushforward_class_along, pushforward_combination, relation_class,
    vanishing_predicate, Direction, LambdaClass,
};
use crate::moduli::{derive_degree_data, euler_char_y, DegreeData};
use crate::rational::{factorial, int, Rational};
use crate::theta::{picard_chern_class, ThetaPoly};

pub const SEED: u64 = 0x7031_7031;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfTestReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

type Outcome = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn builtin_fans() -> Vec<(&'static str, Fan)> {
    vec![("P1", p1()), ("P1xP1", p1xp1()), ("F1", f1())]
}

pub fn data(fan: &Fan, genus: u32, free: &[i64]) -> DegreeData {
    derive_degree_data(fan, &fan.relation_matrix(), genus, free).expect("admissible degrees")
}

/// A random polynomial with small rational coefficients and at most
/// `max_terms` monomials.
pub fn random_theta_poly(rng: &mut impl Rng, rays: usize, genus: u32, max_terms: usize) -> ThetaPoly {
    let mut p = ThetaPoly::zero(rays, genus);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let e: Vec<u32> = (0..rays).map(|_| rng.gen_range(0..=genus.min(2))).collect();
        let c = Rational::new(BigInt::from(rng.gen_range(-5i64..=5)), BigInt::from(rng.gen_range(1i64..=4)));
        p.add_term(e, c);
    }
    p
}

/// A random exponent vector of the given length and total.
pub fn random_split(rng: &mut impl Rng, len: usize, total: u32) -> Vec<u32> {
    let mut m = vec![0u32; len];
    for _ in 0..total {
        m[rng.gen_range(0..len)] += 1;
    }
    m
}

/// Counts isolated torus-fixed points of the fibre directly from its
/// quotient presentation: supports of `l` homogeneous coordinates with
/// independent charges whose untouched rays span a cone.
pub fn fixed_point_count(fan: &Fan, data: &DegreeData) -> i64 {
    let l = fan.picard_rank();
    let a = fan.relation_matrix();
    let charge = |rho: usize| -> Vec<i64> {
        (0..l)
            .map(|lambda| if rho < l { i64::from(lambda == rho) } else { a.entry(lambda, rho - l) })
            .collect()
    };
    let coords: Vec<usize> = (0..fan.num_rays())
        .flat_map(|rho| std::iter::repeat_n(rho, data.rank(rho) as usize))
        .collect();
    let mut count = 0;
    let mut chosen = Vec::with_capacity(l);
    fn walk(
        start: usize,
        chosen: &mut Vec<usize>,
        coords: &[usize],
        l: usize,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if chosen.len() == l {
            visit(chosen);
            return;
        }
        for i in start..coords.len() {
            chosen.push(i);
            walk(i + 1, chosen, coords, l, visit);
            chosen.pop();
        }
    }
    let mut visit = |support: &[usize]| {
        let touched: Vec<usize> = support.iter().map(|&i| coords[i]).collect();
        let matrix: Vec<Vec<i64>> = touched.iter().map(|&rho| charge(rho)).collect();
        if determinant(&matrix) == 0 {
            return;
        }
        let untouched: Vec<usize> = (0..fan.num_rays()).filter(|r| !touched.contains(r)).collect();
        if fan.is_face(&untouched) {
            count += 1;
        }
    };
    walk(0, &mut chosen, &coords, l, &mut visit);
    count
}

/// `(Σ θ_ρ)^j / j!`, the push-forward of `Λ^{N-1+j}` for projective space.
pub fn projective_space_oracle(rays: usize, genus: u32, j: u32) -> ThetaPoly {
    let sum = (0..rays).fold(ThetaPoly::zero(rays, genus), |acc, i| {
        acc.add(&ThetaPoly::theta(rays, genus, i)).expect("same parameters")
    });
    sum.pow(j).scale(&Rational::new(BigInt::one(), factorial(j as u64)))
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn run(&mut self, module: &'static str, name: impl Into<String>, f: impl FnOnce() -> Outcome) {
        let outcome = f();
        self.checks.push(Check {
            module,
            name: name.into(),
            passed: outcome.is_ok(),
            detail: outcome.err(),
        });
    }
}

fn fan_checks(suite: &mut Suite) {
    for (name, fan) in builtin_fans() {
        suite.run("fan-core", format!("{name}: relation matrix"), || {
            let (l, n) = (fan.picard_rank(), fan.dim());
            let a = fan.relation_matrix();
            for lambda in 0..l {
                for j in 0..n {
                    let s = fan.coords(lambda)[j]
                        + (0..n).map(|nu| a.entry(lambda, nu) * fan.coords(l + nu)[j]).sum::<i64>();
                    ensure(s == 0, || format!("row {} fails", lambda + 1))?;
                }
            }
            Ok(())
        });
        suite.run("fan-core", format!("{name}: dual bases"), || {
            for (x, cone) in fan.max_cones().iter().enumerate() {
                for &rho in cone {
                    for &other in cone {
                        let p = fan.dual_pairing(x, rho, other);
                        ensure(p == i64::from(rho == other), || format!("cone {} not dual", x + 1))?;
                    }
                }
            }
            Ok(())
        });
        suite.run("fan-core", format!("{name}: primitive collections"), || {
            let pcs = fan.primitive_collections();
            ensure(!pcs.is_empty(), || "none found".into())?;
            for pc in pcs {
                ensure(!fan.is_face(&pc.0), || format!("{:?} spans a cone", pc.0))?;
                for i in 0..pc.0.len() {
                    let mut sub = pc.0.clone();
                    sub.remove(i);
                    ensure(fan.is_face(&sub), || format!("{:?} not minimal", pc.0))?;
                }
            }
            Ok(())
        });
        suite.run("fan-core", format!("{name}: document round trip"), || {
            let back = ProblemDocument::from_fan(&fan).fan().map_err(|e| e.to_string())?;
            ensure(back == fan, || "fan changed".into())
        });
    }
}

fn degree_cases() -> Vec<(&'static str, Fan, u32, Vec<i64>)> {
    vec![
        ("P1", p1(), 0, vec![1]),
        ("P1", p1(), 1, vec![2]),
        ("P1xP1", p1xp1(), 0, vec![1, 2]),
        ("P1xP1", p1xp1(), 1, vec![2, 3]),
        ("F1", f1(), 0, vec![1, 3]),
        ("F1", f1(), 1, vec![4, 8]),
    ]
}

fn moduli_checks(suite: &mut Suite) {
    for (name, fan, g, d) in degree_cases() {
        let dd = data(&fan, g, &d);
        suite.run("moduli-numerics", format!("{name} g={g} d={d:?}: euler characteristic"), || {
            let (chi, oracle) = (euler_char_y(&fan, &dd), fixed_point_count(&fan, &dd));
            ensure(chi == oracle, || format!("formula {chi}, fixed points {oracle}"))
        });
        suite.run("moduli-numerics", format!("{name} g={g} d={d:?}: dimensions"), || {
            let (r, l) = (fan.num_rays() as i64, fan.picard_rank() as i64);
            ensure(dd.dim_v == dd.dim_mor, || "dim V != dim Mor".into())?;
            ensure(dd.dim_y == dd.ranks.iter().sum::<i64>() - l, || "dim Y".into())?;
            ensure(dd.dim_w - dd.dim_y == r * g as i64, || "dim W".into())
        });
    }
}

fn theta_checks(suite: &mut Suite, rng: &mut ChaCha8Rng) {
    for (rays, g) in [(2usize, 1u32), (3, 2), (4, 1)] {
        let (p, q, s) = (
            random_theta_poly(rng, rays, g, 4),
            random_theta_poly(rng, rays, g, 4),
            random_theta_poly(rng, rays, g, 4),
        );
        suite.run("theta-ring", format!("r={rays} g={g}: ring axioms"), || {
            let m = |a: &ThetaPoly, b: &ThetaPoly| a.mul(b).expect("same parameters");
            let add = |a: &ThetaPoly, b: &ThetaPoly| a.add(b).expect("same parameters");
            ensure(m(&p, &q) == m(&q, &p), || "not commutative".into())?;
            ensure(m(&m(&p, &q), &s) == m(&p, &m(&q, &s)), || "not associative".into())?;
            ensure(m(&p, &add(&q, &s)) == add(&m(&p, &q), &m(&p, &s)), || "not distributive".into())
        });
        suite.run("theta-ring", format!("r={rays} g={g}: nilpotency and Chern classes"), || {
            for rho in 0..rays {
                let th = ThetaPoly::theta(rays, g, rho);
                ensure(th.pow(g + 1).is_zero(), || format!("theta_{} not nilpotent", rho + 1))?;
                let mut exp = ThetaPoly::zero(rays, g);
                for a in 0..=g {
                    exp.add_scaled(&th.pow(a), &Rational::new(BigInt::one(), factorial(a as u64)));
                }
                let c = picard_chern_class(rays, g, rho);
                ensure(c.mul(&exp).expect("same parameters") == ThetaPoly::one(rays, g), || {
                    "c(W) exp(theta) != 1".into()
                })?;
            }
            let back = ThetaPoly::from_records(rays, g, &p.to_records()).map_err(|e| e.to_string())?;
            ensure(back == p, || "records round trip".into())
        });
    }
}

/// Admissible `(n, g, d)` for the projective-space family.
pub const PROJECTIVE_FAMILY: [(usize, u32, i64); 6] = [(1, 0, 1), (1, 0, 2), (1, 1, 2), (1, 2, 4), (2, 0, 1), (2, 1, 2)];

fn localization_checks(suite: &mut Suite, rng: &mut ChaCha8Rng) {
    for (n, g, d) in PROJECTIVE_FAMILY {
        suite.run("localization-engine", format!("P{n} g={g} d={d}: Segre oracle and cancellation"), || {
            let fan = projective_space(n);
            let dd = data(&fan, g, &[d]);
            let dir = choose_direction(&fan);
            let rank: i64 = dd.ranks.iter().sum();
            for j in 0..=g {
                let total = (rank - 1 + j as i64) as u32;
                let m = random_split(rng, n + 1, total);
                let loc = localize(&fan, &dd, &m, &dir, true).map_err(|e| e.to_string())?;
                ensure(loc.total.first_pole().is_none(), || format!("pole at m={m:?}"))?;
                let got = loc.constant_term().map_err(|e| e.to_string())?;
                ensure(got == projective_space_oracle(n + 1, g, j), || format!("m={m:?} gave {got}"))?;
            }
            Ok(())
        });
    }

    suite.run("localization-engine", "explicit closed form on P1 and F1", || {
        for _ in 0..4 {
            let on_p1 = rng.gen_bool(0.5);
            let (fan, dd, a) = random_explicit_case(rng, on_p1);
            let m = explicit_exponents(&fan, &dd, &a).map_err(|e| e.to_string())?;
            let lhs = explicit_pushforward(&fan, &dd, &a).map_err(|e| e.to_string())?;
            let rhs = pushforward_class(&fan, &dd, &m).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("a={a:?}: {lhs} vs {rhs}"))?;
        }
        Ok(())
    });

    suite.run("localization-engine", "F1 direction independence", || {
        let fan = f1();
        let other = Direction::new(&fan, vec![3, -7]).map_err(|e| e.to_string())?;
        let default = choose_direction(&fan);
        for (g, d) in [(0u32, [1i64, 3]), (1, [3, 6])] {
            let dd = data(&fan, g, &d);
            for _ in 0..3 {
                let total = dd.dim_y as u32 + rng.gen_range(0..=2 * g);
                let m = random_split(rng, 4, total);
                let x = pushforward_class_along(&fan, &dd, &m, &default).map_err(|e| e.to_string())?;
                let y = pushforward_class_along(&fan, &dd, &m, &other).map_err(|e| e.to_string())?;
                ensure(x == y, || format!("m={m:?}: {x} vs {y}"))?;
            }
        }
        Ok(())
    });

    for (name, fan, g, d) in degree_cases().into_iter().filter(|c| c.2 == 1) {
        suite.run("localization-engine", format!("{name}: relation annihilation"), || {
            let dd = data(&fan, g, &d);
            relation_annihilation(&fan, &dd, rng, 2)
        });
    }

    suite.run("localization-engine", "F1 vanishing certificate", || {
        let fan = f1();
        let dd = data(&fan, 1, &[4, 8]);
        let m = [5, 7, 5, 3];
        let cert = vanishing_predicate(&fan, &dd, &[0, 2], &m).map_err(|e| e.to_string())?;
        ensure(cert.holds, || "predicate false".into())?;
        let value = integrate_v(&fan, &dd, &m).map_err(|e| e.to_string())?;
        ensure(value.is_zero(), || format!("integral {value}"))
    });
}

/// Exponent data for the closed form: P1 when `on_p1`, F1 otherwise.
pub fn random_explicit_case(rng: &mut impl Rng, on_p1: bool) -> (Fan, DegreeData, Vec<i64>) {
    let g = rng.gen_range(0..=2u32);
    if on_p1 {
        let a = rng.gen_range(1..=3i64);
        let d = (2 * g as i64).max(g as i64 + a + 1) + rng.gen_range(0..=2);
        let fan = p1();
        let dd = data(&fan, g, &[d]);
        (fan, dd, vec![a, a])
    } else {
        let g = g.min(1);
        let mut a: Vec<i64> = (0..3).map(|_| rng.gen_range(1..=2)).collect();
        a.push(a.iter().sum());
        let d1 = (2 * g as i64).max(1) + rng.gen_range(0..=1);
        let d4 = 2 * g as i64 + 2 + a[3] + rng.gen_range(0..=1);
        let fan = f1();
        let dd = data(&fan, g, &[d1, d1 + d4]);
        (fan, dd, a)
    }
}

/// Pushes linear and Euler relations times `per_relation` random cofactor
/// monomials and requires exact zeros.
pub fn relation_annihilation(fan: &Fan, dd: &DegreeData, rng: &mut impl Rng, per_relation: usize) -> Outcome {
    let (r, g) = (fan.num_rays(), dd.genus);
    let dir = choose_direction(fan);
    let mut relations: Vec<(String, LambdaClass, i64)> = (0..fan.dim())
        .map(|nu| (format!("linear relation {}", nu + 1), linear_relation_class(fan, dd, nu), 1))
        .collect();
    for pi in fan.primitive_collections() {
        let degree = pi.0.iter().map(|&rho| dd.rank(rho)).sum();
        relations.push((format!("Euler relation {:?}", pi.0), relation_class(dd, &pi), degree));
    }
    for (label, class, degree) in relations {
        for _ in 0..per_relation {
            let low = (dd.dim_y - degree).max(0) as u32;
            let total = low + rng.gen_range(0..=g);
            let m = random_split(rng, r, total);
            let product = class.mul(&LambdaClass::monomial(r, g, m.clone()));
            let pushed = pushforward_combination(fan, dd, &product, &dir).map_err(|e| e.to_string())?;
            ensure(pushed.is_zero(), || format!("{label} times {m:?} gave {pushed}"))?;
        }
    }
    Ok(())
}

fn jacobian_checks(suite: &mut Suite, rng: &mut ChaCha8Rng) {
    suite.run("jacobian-integration", "theta top power", || {
        for g in 0..=4u32 {
            let value = integrate_jl(&ExteriorElement::theta(g, 1, 0).pow(g));
            ensure(value == Rational::from_integer(factorial(g as u64)), || format!("g={g}: {value}"))?;
        }
        Ok(())
    });
    for (name, fan) in builtin_fans() {
        suite.run("jacobian-integration", format!("{name}: ring homomorphism and nilpotency"), || {
            psi_properties(&fan, rng, 3)
        });
    }
    suite.run("jacobian-integration", "F1 square of pulled-back theta_4", || {
        let psi = PsiMap::new(&f1().relation_matrix(), 1).map_err(|e| e.to_string())?;
        let value = integrate_jl(&psi.image(3).pow(2));
        ensure(value.is_zero(), || format!("integral {value}"))
    });
    for (n, g, d) in PROJECTIVE_FAMILY {
        suite.run("jacobian-integration", format!("P{n} g={g} d={d}: top intersection"), || {
            let fan = projective_space(n);
            let dd = data(&fan, g, &[d]);
            let mut m = vec![0u32; n + 1];
            m[0] = dd.dim_v as u32;
            let value = integrate_v(&fan, &dd, &m).map_err(|e| e.to_string())?;
            let expected = int((n as i64 + 1).pow(g));
            ensure(value == expected, || format!("got {value}, expected {expected}"))
        });
    }
}

/// `ψ*(pq) = ψ*p ∧ ψ*q` on random pairs and `(ψ*θ_ρ)^{g+1} = 0`, for
/// `g ∈ {1, 2}`.
pub fn psi_properties(fan: &Fan, rng: &mut impl Rng, pairs: usize) -> Outcome {
    let r = fan.num_rays();
    for g in 1..=2u32 {
        let psi = PsiMap::new(&fan.relation_matrix(), g).map_err(|e| e.to_string())?;
        for _ in 0..pairs {
            let p = random_theta_poly(rng, r, g, 3);
            let q = random_theta_poly(rng, r, g, 3);
            let pq = p.mul(&q).expect("same parameters");
            let lhs = psi_pullback(&pq, &psi).map_err(|e| e.to_string())?;
            let rhs = psi_pullback(&p, &psi)
                .and_then(|a| Ok(a.wedge(&psi_pullback(&q, &psi)?)))
                .map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("g={g}: psi*(pq) != psi*p psi*q for p={p}, q={q}"))?;
        }
        for rho in 0..r {
            ensure(psi.image(rho).pow(g + 1).is_zero(), || {
                format!("g={g}: psi*theta_{} not nilpotent", rho + 1)
            })?;
        }
    }
    Ok(())
}

/// Runs every suite. The report passes iff every check passes.
pub fn run(seed: u64) -> SelfTestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suite = Suite { checks: Vec::new() };
    fan_checks(&mut suite);
    moduli_checks(&mut suite);
    theta_checks(&mut suite, &mut rng);
    localization_checks(&mut suite, &mut rng);
    jacobian_checks(&mut suite, &mut rng);
    let passed = suite.checks.iter().all(|c| c.passed);
    SelfTestReport {
        seed,
        passed,
        checks: suite.checks,
    }
}
