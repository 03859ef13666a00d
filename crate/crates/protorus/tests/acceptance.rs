//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see them all.

use num_bigint::BigInt;
use num_rational::BigRational;

use protorus::exact::{rat, GeneratorEnv, SymbolicScalar};
use protorus::families::{
    build_family, classify_solenoid_pair, geometric_tail, FamilyTag, SolenoidClassification,
    SolenoidObstruction,
};
use protorus::intlat::{exterior_parity, exterior_power, IntMatrix, Parity, SubsetBasis};
use protorus::prolimit::{
    divisibility_probe, limit_trace, projection_scale_member, scale_classification,
    scaling_constants, unit_element, Divisibility, LimitElement, ScaleMembership, ScaleVerdict,
};
use protorus::spectral::{
    anticommutation_defect, banded_commutator_check, clifford_generators, compatibility_check,
    cutdown_count, finite_multiplicity_check, inner_fluctuation_check, make_multiplier,
    monomial_commutator_norm, resolvent_diagnostic, right_conformal_check, spectrum_enumerate,
    CMatrix, Compatibility, CutdownCount, HermitianMatrix, Label, MultiplicityCheck,
    MultiplierSpec, ResolventDiagnostic, SolenoidLabel,
};
use protorus::torus::{trace_pairing_vector, SkewForm, TorusDescriptor};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

struct Xorshift(u64);

impl Xorshift {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }

    fn real(&mut self) -> f64 {
        (self.next() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

fn theta_env() -> GeneratorEnv {
    let mut env = GeneratorEnv::new();
    env.declare("theta", rat(618, 1000), rat(1, 1_000_000)).unwrap();
    env
}

fn theta() -> SymbolicScalar {
    SymbolicScalar::generator(0, 1)
}

#[test]
fn criterion_01_exterior_functoriality() {
    let start = std::time::Instant::now();
    let mut rng = Xorshift(0x1234_5678_9abc_def1);
    for trial in 0..200 {
        let n = rng.int(1, 4) as usize;
        let k = rng.int(1, 4) as usize;
        let l = rng.int(1, 4) as usize;
        let a = IntMatrix::from_fn(n, k, |_, _| BigInt::from(rng.int(-3, 3)));
        let b = IntMatrix::from_fn(k, l, |_, _| BigInt::from(rng.int(-3, 3)));
        let ab = a.mul(&b);
        for p in 0..=n.max(k).max(l) {
            let lhs = exterior_power(&ab, p);
            let rhs = exterior_power(&a, p).mul(&exterior_power(&b, p));
            assert_eq!(lhs, rhs, "criterion 1 FAIL: degree {p}, trial {trial}");
        }
        for parity in [Parity::Even, Parity::Odd] {
            let lhs = exterior_parity(&ab, parity);
            let rhs = exterior_parity(&a, parity).mul(&exterior_parity(&b, parity));
            assert_eq!(lhs, rhs, "criterion 1 FAIL: parity trial {trial}");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "criterion 1 FAIL: took {elapsed:?}");
    println!("criterion 01 PASS: exterior functoriality on 200 random pairs ({elapsed:?})");
}

#[test]
fn criterion_02_pfaffian_law() {
    let start = std::time::Instant::now();
    // deterministic entries over three generators, all sizes up to 6
    let gen = |i: usize| SymbolicScalar::generator(i, 3);
    for m in 2..=6usize {
        let form = SkewForm::from_upper_fn(m, |j, k| {
            gen((j + 2 * k) % 3)
                .scale_rational(&rat(((j * 7 + k * 3) % 5) as i64 - 2, 1 + ((j + k) % 3) as i64))
                .add(&SymbolicScalar::from_rational(rat(
                    ((j * 2 + k) % 3) as i64 - 1,
                    2,
                )))
        });
        let basis = SubsetBasis::with_parity(m, Parity::Even);
        for subset in &basis.subsets {
            let pf = form.pfaffian(subset).unwrap();
            let det = form.principal_det(subset);
            assert_eq!(
                pf.mul(&pf),
                det,
                "criterion 2 FAIL: m={m}, subset {subset:?}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "criterion 2 FAIL: took {elapsed:?}");
    println!("criterion 02 PASS: pf^2 = det for all even subsets, m <= 6 ({elapsed:?})");
}

#[test]
fn criterion_03_trace_table() {
    let alpha = SymbolicScalar::generator(0, 2);
    let beta = SymbolicScalar::generator(1, 2);
    let descriptor = TorusDescriptor::unamplified(
        SkewForm::j(alpha.clone()).direct_sum(&SkewForm::j(beta.clone())),
    );
    let got = trace_pairing_vector(&descriptor);
    let z = SymbolicScalar::zero;
    let want = vec![
        SymbolicScalar::one(),
        alpha.clone(),
        z(),
        z(),
        z(),
        z(),
        beta.clone(),
        alpha.mul(&beta),
    ];
    assert_eq!(got, want, "criterion 3 FAIL");
    println!("criterion 03 PASS: trace pairing of J(a)+J(b) is (1, a, 0, 0, 0, 0, b, ab)");
}

#[test]
fn criterion_04_solenoid_invariant() {
    let env = theta_env();
    for n in [2u64, 3, 4] {
        let sys = build_family(&FamilyTag::Solenoid { theta: theta(), n }, &env, 14).unwrap();
        // stage maps
        for i in 0..6 {
            let stage = sys.stage(i).unwrap();
            let mut k0 = IntMatrix::identity(2);
            k0[(1, 1)] = BigInt::from(n * n);
            assert_eq!(stage.map.k0.get(), &k0, "criterion 4 FAIL: k0 at N={n}");
            assert_eq!(
                stage.map.k1.get(),
                &IntMatrix::identity(2).scale(&BigInt::from(n)),
                "criterion 4 FAIL: k1 at N={n}"
            );
        }
        // c identically 1, unit class (1,0)
        let (t, c) = scaling_constants(&sys, 8).unwrap();
        assert!(t.iter().all(|v| v.is_one()), "criterion 4 FAIL: t at N={n}");
        assert!(c.iter().all(|v| v.is_one()), "criterion 4 FAIL: c at N={n}");
        for i in 0..4 {
            let unit = unit_element(&sys, i).unwrap();
            assert_eq!(
                unit.coords,
                vec![BigInt::from(1), BigInt::from(0)],
                "criterion 4 FAIL: unit at N={n}"
            );
        }
        // divisibility of the K1 generator
        let k1_gen = LimitElement::odd(0, vec![1, 0]);
        for p in [2u64, 3] {
            let expected_divisible = n % p == 0;
            let verdict = divisibility_probe(&k1_gen, p, 8, &sys).unwrap();
            if expected_divisible {
                assert_eq!(
                    verdict,
                    Divisibility::DivisibleToDepth,
                    "criterion 4 FAIL: p={p} | N={n} should divide to depth 8"
                );
            } else {
                assert_eq!(
                    verdict,
                    Divisibility::ObstructedAt { step: 1 },
                    "criterion 4 FAIL: p={p} with N={n} should obstruct at step 1"
                );
            }
        }
    }
    println!("criterion 04 PASS: solenoid stage maps, constants, unit class, divisibility for N in {{2,3,4}}");
}

#[test]
fn criterion_05_ax7_identities() {
    let start = std::time::Instant::now();
    let env = theta_env();
    let mut rng = Xorshift(0xfeed_beef_cafe_0001);
    for n in [2u64, 3] {
        let sys = build_family(&FamilyTag::Ax7 { n, theta0: theta() }, &env, 11).unwrap();
        let (_, c) = scaling_constants(&sys, 10).unwrap();
        for i in 0..=10usize {
            let s_i = SymbolicScalar::from_rational(geometric_tail(n, i));
            // c_n = 1 + theta0 * s_n
            assert_eq!(
                c[i],
                SymbolicScalar::one().add(&theta().mul(&s_i)),
                "criterion 5 FAIL: c at stage {i}, N={n}"
            );
            // c_n * theta_n = theta0 / N^n
            let theta_i = sys.stage(i).unwrap().descriptor.form.entry(0, 1);
            let lhs = c[i].mul(&theta_i);
            let rhs = theta()
                .div(&SymbolicScalar::from_rational(BigRational::from_integer(
                    BigInt::from(n).pow(i as u32),
                )))
                .unwrap();
            assert_eq!(lhs, rhs, "criterion 5 FAIL: c*theta at stage {i}, N={n}");
            // rho([e_n]) = 1 + theta0 * sum N^{-k}
            let unit = unit_element(&sys, i).unwrap();
            assert_eq!(
                limit_trace(&unit, &sys).unwrap(),
                SymbolicScalar::one().add(&theta().mul(&s_i)),
                "criterion 5 FAIL: unit trace at stage {i}, N={n}"
            );
        }
        // F_{n+1}(D_N v) = F_n(v) on 100 random vectors, exact rationals
        let d_n = |a: i64, b: i64| (a, -a + n as i64 * b);
        let f = |stage: usize, a: i64, b: i64| -> (BigRational, BigRational) {
            let s = geometric_tail(n, stage);
            (
                BigRational::from_integer(BigInt::from(a)),
                BigRational::new(BigInt::from(b), BigInt::from(n).pow(stage as u32))
                    + BigRational::from_integer(BigInt::from(a)) * s,
            )
        };
        for _ in 0..100 {
            let a = rng.int(-50, 50);
            let b = rng.int(-50, 50);
            let stage = rng.int(0, 9) as usize;
            let (da, db) = d_n(a, b);
            assert_eq!(
                f(stage + 1, da, db),
                f(stage, a, b),
                "criterion 5 FAIL: F-transport at stage {stage}, N={n}, v=({a},{b})"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "criterion 5 FAIL: took {elapsed:?}");
    println!("criterion 05 PASS: noncorner recurrence identities exact for N in {{2,3}}, n <= 10 ({elapsed:?})");
}

#[test]
fn criterion_06_classification() {
    let env = theta_env();
    let res = classify_solenoid_pair(&theta(), 2, &theta(), 4, &env, 6).unwrap();
    assert_eq!(
        res,
        SolenoidClassification::Isomorphic { unit: "1".into() },
        "criterion 6 FAIL: (theta,2) vs (theta,4)"
    );
    let mut env2 = GeneratorEnv::new();
    env2.declare("theta", rat(618, 1000), rat(1, 1000)).unwrap();
    env2.declare("thetap", rat(414, 1000), rat(1, 1000)).unwrap();
    let res = classify_solenoid_pair(
        &SymbolicScalar::generator(0, 2),
        2,
        &SymbolicScalar::generator(1, 2),
        6,
        &env2,
        6,
    )
    .unwrap();
    assert_eq!(
        res,
        SolenoidClassification::NotIsomorphic(SolenoidObstruction::PrimeSets {
            left: vec![2],
            right: vec![2, 3],
        }),
        "criterion 6 FAIL: prime sets"
    );
    let res = classify_solenoid_pair(
        &theta(),
        2,
        &theta().scale_rational(&rat(4, 1)),
        2,
        &env,
        6,
    )
    .unwrap();
    assert_eq!(
        res,
        SolenoidClassification::Isomorphic { unit: "4".into() },
        "criterion 6 FAIL: (theta,2) vs (4*theta,2)"
    );
    println!("criterion 06 PASS: solenoid pair classification verdicts");
}

#[test]
fn criterion_07_scale_and_projection_scale() {
    let env = theta_env();
    // stable corner: infinite scale, all positive classes are members
    let sys = build_family(&FamilyTag::StableCorner { form: SkewForm::j(theta()) }, &env, 16)
        .unwrap();
    assert_eq!(
        scale_classification(&sys, 12).unwrap(),
        ScaleVerdict::Infinite,
        "criterion 7 FAIL: stable corner scale"
    );
    let mut rng = Xorshift(0x0dd0_1234_5678_0007);
    let mut tested = 0;
    while tested < 20 {
        let a = rng.int(1, 10);
        let b = rng.int(-a, a);
        // a + b*theta >= a(1 - theta) > 0
        let x = LimitElement::even(0, vec![a, b]);
        match projection_scale_member(&x, &sys, 16).unwrap() {
            ScaleMembership::Member { .. } => tested += 1,
            other => panic!("criterion 7 FAIL: ({a},{b}) gave {other:?}"),
        }
    }
    // noncorner family: finite scale 1 + theta0 and a refuted class of trace 2
    let sys = build_family(&FamilyTag::Ax7 { n: 2, theta0: theta() }, &env, 12).unwrap();
    match scale_classification(&sys, 10).unwrap() {
        ScaleVerdict::Finite { limit } => {
            assert_eq!(
                limit,
                SymbolicScalar::one().add(&theta()),
                "criterion 7 FAIL: scale limit"
            );
        }
        other => panic!("criterion 7 FAIL: scale verdict {other:?}"),
    }
    let two = LimitElement::even(0, vec![2, 0]);
    assert_eq!(
        limit_trace(&two, &sys).unwrap(),
        SymbolicScalar::from_int(2)
    );
    assert_eq!(
        projection_scale_member(&two, &sys, 10).unwrap(),
        ScaleMembership::NotMemberCertified,
        "criterion 7 FAIL: trace-2 class should be refuted"
    );
    println!("criterion 07 PASS: scale verdicts and projection-scale membership");
}

#[test]
fn criterion_08_flat_spectral_law() {
    let f = make_multiplier(&MultiplierSpec::Flat {
        l: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        d: 2,
    })
    .unwrap();
    let spec = spectrum_enumerate(&f, TWO_PI).unwrap();
    let zeros = spec.iter().filter(|(_, v)| v.abs() <= 1e-9).count();
    let plus = spec.iter().filter(|(_, v)| (v - TWO_PI).abs() <= 1e-9).count();
    let minus = spec.iter().filter(|(_, v)| (v + TWO_PI).abs() <= 1e-9).count();
    assert_eq!(
        (zeros, plus, minus),
        (2, 4, 4),
        "criterion 8 FAIL: spectrum multiset {spec:?}"
    );
    assert_eq!(spec.len(), 10, "criterion 8 FAIL: total");
    match finite_multiplicity_check(&f, TWO_PI).unwrap() {
        MultiplicityCheck::CertifiedFinite { count } => {
            assert_eq!(count, 10, "criterion 8 FAIL: count")
        }
        other => panic!("criterion 8 FAIL: {other:?}"),
    }
    println!("criterion 08 PASS: flat spectrum {{0 x2, +-2pi x4 each}}, count 10");
}

#[test]
fn criterion_09_clifford_and_eigensolver() {
    for d in 1..=8 {
        let gammas = clifford_generators(d).unwrap();
        let defect = anticommutation_defect(&gammas);
        assert!(
            defect <= 1e-12,
            "criterion 9 FAIL: anticommutation defect {defect:.3e} at d={d}"
        );
    }
    // Jacobi against closed forms
    let mut rng = Xorshift(0x5eed_5eed_5eed_0009);
    for _ in 0..60 {
        let (a, br, bi, d) = (rng.real(), rng.real(), rng.real(), rng.real());
        let h = HermitianMatrix::symmetrized(CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => num_complex::Complex64::new(a, 0.0),
            (1, 1) => num_complex::Complex64::new(d, 0.0),
            (0, 1) => num_complex::Complex64::new(br, bi),
            _ => num_complex::Complex64::new(br, -bi),
        }));
        let eigs = h.eigenvalues(1e-14).unwrap();
        let tr = a + d;
        let det = a * d - (br * br + bi * bi);
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        let want = [(tr - disc) / 2.0, (tr + disc) / 2.0];
        for k in 0..2 {
            assert!(
                (eigs[k] - want[k]).abs() <= 1e-10,
                "criterion 9 FAIL: 2x2 eig {} vs {}",
                eigs[k],
                want[k]
            );
        }
    }
    for _ in 0..60 {
        let mut m = [[0.0f64; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                m[i][j] = rng.real();
                m[j][i] = m[i][j];
            }
        }
        let h = HermitianMatrix::from_real_rows(&[m[0].to_vec(), m[1].to_vec(), m[2].to_vec()]);
        let eigs = h.eigenvalues(1e-14).unwrap();
        let want = sym3_closed_form(&m);
        for k in 0..3 {
            assert!(
                (eigs[k] - want[k]).abs() <= 1e-10,
                "criterion 9 FAIL: 3x3 eig {eigs:?} vs {want:?}"
            );
        }
    }
    println!("criterion 09 PASS: Clifford relations (d <= 8) and Jacobi vs closed forms");
}

fn sym3_closed_form(m: &[[f64; 3]; 3]) -> [f64; 3] {
    let p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p < 1e-300 {
        return [q, q, q];
    }
    let mut b = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (m[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (detb / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    let mut out = [e1, e2, e3];
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

#[test]
fn criterion_10_solenoid_compatibility_and_resolvent() {
    let n = 2i64;
    // rescaled flat family is exactly compatible on the ball at R = 8 pi
    for stage in 1..=4usize {
        let scale = |s: usize| (n as f64).powi(-(s as i32 - 1));
        let f = make_multiplier(&MultiplierSpec::Flat {
            l: vec![vec![scale(stage), 0.0], vec![0.0, scale(stage)]],
            d: 2,
        })
        .unwrap();
        let g = make_multiplier(&MultiplierSpec::Flat {
            l: vec![vec![scale(stage + 1), 0.0], vec![0.0, scale(stage + 1)]],
            d: 2,
        })
        .unwrap();
        let m = IntMatrix::identity(2).scale(&BigInt::from(n));
        let j = CMatrix::identity(f.fiber_dim());
        match compatibility_check(&f, &g, &m, &j, 8.0 * std::f64::consts::PI).unwrap() {
            Compatibility::ExactOnBall => {}
            Compatibility::MaxDefect { value, witness } => {
                panic!("criterion 10 FAIL: stage {stage} defect {value} at {witness}")
            }
        }
    }
    // flat limit on the solenoid labels: explicit non-compactness witness
    let flat_limit = make_multiplier(&MultiplierSpec::FlatSolenoid { n: 2 }).unwrap();
    match resolvent_diagnostic(&flat_limit, &[1.0], 10).unwrap() {
        ResolventDiagnostic::NonCompactWitness { witness } => {
            assert_eq!(witness.len(), 10, "criterion 10 FAIL: depth");
            for (k, (label, eig)) in witness.iter().enumerate() {
                let Label::Solenoid(g) = label else {
                    panic!("criterion 10 FAIL: label type")
                };
                assert_eq!(
                    (g.num, g.depth as usize),
                    ([1, 0], k + 1),
                    "criterion 10 FAIL: witness label"
                );
                let want = TWO_PI / 2f64.powi(k as i32 + 1);
                assert!(
                    (eig - want).abs() <= 1e-12,
                    "criterion 10 FAIL: witness eigenvalue"
                );
            }
        }
        other => panic!("criterion 10 FAIL: {other:?}"),
    }
    // proper length on the solenoid labels: certified counts, brute-forced
    let length = make_multiplier(&MultiplierSpec::LengthSolenoid { n: 2 }).unwrap();
    match resolvent_diagnostic(&length, &[1.0, 2.0, 4.0], 10).unwrap() {
        ResolventDiagnostic::CompactEvidence { counts } => {
            assert_eq!(counts[0], (1.0, 5), "criterion 10 FAIL: count at R=1");
            for &(r, count) in &counts {
                assert_eq!(
                    count,
                    brute_force_solenoid_count(r),
                    "criterion 10 FAIL: oracle disagrees at R={r}"
                );
            }
        }
        other => panic!("criterion 10 FAIL: {other:?}"),
    }
    println!("criterion 10 PASS: compatibility exact on ball; witness sequence and certified counts agree");
}

fn brute_force_solenoid_count(radius: f64) -> usize {
    let mut seen = std::collections::HashSet::new();
    let depth_cap = radius.floor() as u32;
    for h in 0..=depth_cap {
        let scale = 2i64.pow(h);
        let lim = ((radius - h as f64) * scale as f64).ceil() as i64 + 1;
        for a1 in -lim..=lim {
            for a2 in -lim..=lim {
                let g = SolenoidLabel::new([a1, a2], h, 2);
                if g.length(2) <= radius + 1e-12 {
                    seen.insert(g);
                }
            }
        }
    }
    seen.len()
}

#[test]
fn criterion_11_increment_and_commutator() {
    let flat = make_multiplier(&MultiplierSpec::Flat {
        l: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        d: 2,
    })
    .unwrap();
    let inc = flat.increment(&Label::lattice(&[1, 1])).unwrap();
    let want = TWO_PI * 2.0f64.sqrt();
    assert!(
        (inc.value() - want).abs() <= 1e-12,
        "criterion 11 FAIL: flat increment {} vs {want}",
        inc.value()
    );
    let length = make_multiplier(&MultiplierSpec::LengthSolenoid { n: 2 }).unwrap();
    let norm = monomial_commutator_norm(
        &length,
        &Label::Solenoid(SolenoidLabel::new([1, 0], 0, 2)),
        3.0,
    )
    .unwrap();
    assert!(
        (norm.upper - 1.0).abs() <= 1e-12,
        "criterion 11 FAIL: upper {}",
        norm.upper
    );
    assert!(
        norm.lower >= 1.0 - 1e-9,
        "criterion 11 FAIL: sampled lower {}",
        norm.lower
    );
    println!("criterion 11 PASS: flat increment 2*pi*sqrt(2); length commutator bounds 1/1");
}

#[test]
fn criterion_12_nonunital_counting() {
    let model = make_multiplier(&MultiplierSpec::WeightedOmega {
        w_slope: rat(1, 1),
        lambda_slope: rat(1, 1),
    })
    .unwrap();
    // brute-force oracle: count (beta, g) with sum j*|g_j| + beta <= 2 over a box
    let mut oracle = 0u64;
    for beta in 1..=2i64 {
        for g1 in -2..=2i64 {
            for g2 in -2..=2i64 {
                if (g1.abs() + 2 * g2.abs() + beta) as f64 <= 2.0 {
                    oracle += 1;
                }
            }
        }
    }
    let cut = 2u64;
    match cutdown_count(&model, Some(cut), 2.0).unwrap() {
        CutdownCount::Finite { count } => {
            assert_eq!(count, cut * oracle, "criterion 12 FAIL: count vs oracle");
            assert_eq!(count, 8, "criterion 12 FAIL: expected 8");
        }
        other => panic!("criterion 12 FAIL: {other:?}"),
    }
    match cutdown_count(&model, None, 2.0).unwrap() {
        CutdownCount::Unbounded { witness } => {
            assert!(
                witness.contains("unbounded"),
                "criterion 12 FAIL: witness text"
            );
        }
        other => panic!("criterion 12 FAIL: {other:?}"),
    }
    println!("criterion 12 PASS: cut-down count 8 matches the brute-force oracle; omitted cut is unbounded");
}

#[test]
fn criterion_13_banded_inequality() {
    let mut rng = Xorshift(0xabcd_ef01_2345_0013);
    for trial in 0..100 {
        let n = 4 + (trial % 13); // dims <= 16
        let band = 1 + (trial % 3) as u32; // bands <= 3
        let mut levels = Vec::with_capacity(n);
        let mut level = 0u32;
        for i in 0..n {
            if i > 0 && rng.real() > 0.0 {
                level += 1;
            }
            levels.push(level);
        }
        let t = CMatrix::from_fn(n, n, |i, j| {
            if levels[i].abs_diff(levels[j]) <= band {
                num_complex::Complex64::new(rng.real(), rng.real())
            } else {
                num_complex::Complex64::new(0.0, 0.0)
            }
        });
        let check = banded_commutator_check(&t, &levels).unwrap();
        assert!(
            check.pass,
            "criterion 13 FAIL: trial {trial}, lhs {} > rhs {}",
            check.lhs, check.rhs
        );
    }
    println!("criterion 13 PASS: |[D,T]| <= R(R+1)|T| on 100 random banded matrices");
}

#[test]
fn criterion_14_fluctuation_and_conformal() {
    const THETA: f64 = 0.618;
    let h = SolenoidLabel::new([1, 0], 0, 2);
    let report = inner_fluctuation_check(2, THETA, h, 1.0, 128).unwrap();
    assert!(
        report.norm_b <= 1.0 + 1e-9,
        "criterion 14 FAIL: |B| = {}",
        report.norm_b
    );
    assert!(
        report.selfadjoint_defect <= 1e-9,
        "criterion 14 FAIL: selfadjointness"
    );
    let conf = right_conformal_check(2, THETA, 1, 0.25, [1, 0], [0, 1], 128).unwrap();
    assert!(
        conf.transport_residual <= 1e-9,
        "criterion 14 FAIL: transport residual {}",
        conf.transport_residual
    );
    assert!(
        conf.commutation_residual <= 1e-9,
        "criterion 14 FAIL: commutation residual {}",
        conf.commutation_residual
    );
    println!("criterion 14 PASS: fluctuation bound and conformal transport identity on truncation 128");
}
