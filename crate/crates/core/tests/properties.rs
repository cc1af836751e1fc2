use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;

use cohom::algebra::{multiply, AlgebraElement, AlgebraTag};
use cohom::angles::{kahler_constancy, qk_angle_at, qk_constancy, ComplexStructure, QuaternionicStructure};
use cohom::classify::classify_subspace;
use cohom::families::{construct, enumerate_admissible, FamilyLabel, FamilySpec};
use cohom::model::{build_s, is_subalgebra, SolvableModel};
use cohom::numerics::{Matrix, Sampler, Tolerance};
use cohom::stabilizers::{grassmann_orbit_dim, kx_basis, spin7_basis};
use cohom::subspace::Subspace;

const TAGS: [AlgebraTag; 4] = [AlgebraTag::R, AlgebraTag::C, AlgebraTag::H, AlgebraTag::O];

fn tag() -> impl Strategy<Value = AlgebraTag> {
    prop::sample::select(TAGS.to_vec())
}

fn element(tag: AlgebraTag) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec(-3.0..3.0f64, tag.real_dim()).prop_map(move |c| AlgebraElement::new(tag, &c).unwrap())
}

fn triple() -> impl Strategy<Value = (AlgebraElement, AlgebraElement, AlgebraElement)> {
    tag().prop_flat_map(|t| (element(t), element(t), element(t)))
}

fn model() -> impl Strategy<Value = SolvableModel> {
    prop_oneof![
        (2..=5usize).prop_map(|n| SolvableModel::new(AlgebraTag::R, n).unwrap()),
        (2..=4usize).prop_map(|n| SolvableModel::new(AlgebraTag::C, n).unwrap()),
        (2..=3usize).prop_map(|n| SolvableModel::new(AlgebraTag::H, n).unwrap()),
        Just(SolvableModel::new(AlgebraTag::O, 2).unwrap()),
    ]
}

fn random_subspace(s: &mut Sampler, ambient: usize) -> Subspace {
    let k = 1 + s.below(ambient);
    Subspace::from_orthonormal(s.frame(ambient, k)).unwrap()
}

fn random_v0(s: &mut Sampler, ambient: usize) -> Subspace {
    let k = s.below(ambient + 1);
    Subspace::from_orthonormal(s.frame(ambient, k)).unwrap()
}

fn quaternionic(m: &SolvableModel) -> QuaternionicStructure {
    QuaternionicStructure::new(m.quaternionic_structure().unwrap()).unwrap()
}

fn rotation(s: &mut Sampler) -> Matrix {
    let mut r = s.frame(3, 3);
    if r.determinant() < 0.0 {
        r.column_mut(0).neg_mut();
    }
    r
}

fn coeff_diff(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
    a.coords().iter().zip(b.coords()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_multiplicative((x, y, _) in triple()) {
        let xy = multiply(&x, &y).unwrap();
        prop_assert!((xy.norm() - x.norm() * y.norm()).abs() < 1e-12 * (1.0 + x.norm() * y.norm()));
    }

    #[test]
    fn alternative_laws((x, y, _) in triple()) {
        let xx = multiply(&x, &x).unwrap();
        let left = multiply(&x, &multiply(&x, &y).unwrap()).unwrap();
        let right = multiply(&multiply(&y, &x).unwrap(), &x).unwrap();
        let scale = 1.0 + x.norm_sqr() * y.norm();
        prop_assert!(coeff_diff(&left, &multiply(&xx, &y).unwrap()) < 1e-12 * scale);
        prop_assert!(coeff_diff(&right, &multiply(&y, &xx).unwrap()) < 1e-12 * scale);
    }

    #[test]
    fn conjugation_reverses_products((x, y, _) in triple()) {
        let lhs = multiply(&x, &y).unwrap().conjugate();
        let rhs = multiply(&y.conjugate(), &x.conjugate()).unwrap();
        prop_assert!(coeff_diff(&lhs, &rhs) < 1e-12 * (1.0 + x.norm() * y.norm()));
    }

    #[test]
    fn right_multiplication_by_imaginary_squares_to_minus_norm((x, z, _) in triple()) {
        let z = z.imaginary_part();
        let xzz = multiply(&multiply(&x, &z).unwrap(), &z).unwrap();
        let expected = x.scale(-z.norm_sqr());
        prop_assert!(coeff_diff(&xzz, &expected) < 1e-12 * (1.0 + x.norm() * z.norm_sqr()));
    }

    #[test]
    fn associative_below_octonions((x, y, z) in triple()) {
        prop_assume!(x.tag() != AlgebraTag::O);
        let a = multiply(&multiply(&x, &y).unwrap(), &z).unwrap();
        let b = multiply(&x, &multiply(&y, &z).unwrap()).unwrap();
        prop_assert!(coeff_diff(&a, &b) < 1e-12 * (1.0 + x.norm() * y.norm() * z.norm()));
    }

    #[test]
    fn complement_and_projector(ambient in 1..12usize, seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let w = random_subspace(&mut s, ambient);
        let c = w.complement();
        prop_assert_eq!(w.dim() + c.dim(), ambient);
        let p = w.projector();
        prop_assert!((&p * &p - &p).amax() < 1e-12);
        prop_assert!((p + c.projector() - Matrix::identity(ambient, ambient)).amax() < 1e-12);
        let x = s.gaussian(ambient);
        prop_assert!(w.residual(&w.project(&x)) < 1e-12 * (1.0 + x.norm()));
    }

    #[test]
    fn span_ignores_basis_choice(ambient in 2..10usize, seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let w = random_subspace(&mut s, ambient);
        let mix = s.gaussian_matrix(w.dim(), w.dim()) + Matrix::identity(w.dim(), w.dim()) * 3.0;
        let other = Subspace::span(&(w.basis() * mix), &Tolerance::default());
        prop_assert!(other.distance(&w) < 1e-10);
    }

    #[test]
    fn build_s_is_closed(m in model(), seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let v0 = random_v0(&mut s, m.dim_v());
        let sub = build_s(&m, &v0).unwrap();
        prop_assert!(is_subalgebra(&sub, &Tolerance::default()).closed);
    }

    #[test]
    fn grassmann_orbit_fits_in_grassmannian(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let v = random_subspace(&mut s, 8);
        let d = grassmann_orbit_dim(spin7_basis(), &v).unwrap();
        prop_assert!(d <= v.dim() * v.codim());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn qk_triple_ignores_structure_basis(n in 2..=4usize, seed in any::<u64>()) {
        let m = SolvableModel::new(AlgebraTag::H, n).unwrap();
        let q = quaternionic(&m);
        let mut s = Sampler::new(seed);
        let w = random_subspace(&mut s, m.dim_v());
        let rq = q.rotated(&rotation(&mut s)).unwrap();
        let v = w.basis() * s.unit(w.dim());
        let a = qk_angle_at(&w, &v, &q).unwrap();
        let b = qk_angle_at(&w, &v, &rq).unwrap();
        prop_assert!(a.distance(&b.phi) < 1e-8, "{:?} vs {:?}", a.phi, b.phi);
        for x in a.phi {
            prop_assert!((0.0..=FRAC_PI_2).contains(&x));
        }
    }

    #[test]
    fn qk_triple_is_kx_equivariant(n in 2..=3usize, seed in any::<u64>()) {
        let m = SolvableModel::new(AlgebraTag::H, n).unwrap();
        let q = quaternionic(&m);
        let mut s = Sampler::new(seed);
        let w = random_subspace(&mut s, m.dim_v());
        let k = kx_basis(&m).random_group_element(&mut s);
        let kw = w.transformed(&k).unwrap();
        let v = w.basis() * s.unit(w.dim());
        let a = qk_angle_at(&w, &v, &q).unwrap();
        let b = qk_angle_at(&kw, &(&k * &v), &q).unwrap();
        prop_assert!(a.distance(&b.phi) < 1e-8, "{:?} vs {:?}", a.phi, b.phi);
    }

    #[test]
    fn kahler_report_is_unitary_invariant(n in 2..=5usize, seed in any::<u64>()) {
        let m = SolvableModel::new(AlgebraTag::C, n).unwrap();
        let j = ComplexStructure::new(m.complex_structure().unwrap()).unwrap();
        let mut s = Sampler::new(seed);
        let w = random_subspace(&mut s, m.dim_v());
        let k = kx_basis(&m).random_group_element(&mut s);
        let tol = Tolerance::default();
        let a = kahler_constancy(&w, &j, &tol).unwrap();
        let b = kahler_constancy(&w.transformed(&k).unwrap(), &j, &tol).unwrap();
        prop_assert!((a.defect - b.defect).abs() < 1e-8);
        prop_assert_eq!(a.constant, b.constant);
        if a.constant {
            prop_assert!((a.phi - b.phi).abs() < 1e-8);
        }
    }

    #[test]
    fn classify_ignores_basis_of_v0(m in model(), seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let v0 = random_v0(&mut s, m.dim_v());
        let rot = s.frame(v0.dim(), v0.dim());
        let v0b = Subspace::from_orthonormal(v0.basis() * rot).unwrap();
        let tol = Tolerance::default();
        let a = classify_subspace(&m, &v0, &tol, 16, 1).unwrap();
        let b = classify_subspace(&m, &v0b, &tol, 16, 1).unwrap();
        prop_assert!(a.agrees_with(&b, 1e-8), "{a}\n---\n{b}");
    }

    #[test]
    fn real_hyperbolic_space_has_no_non_tg_actions(n in 2..=6usize, seed in any::<u64>()) {
        let m = SolvableModel::new(AlgebraTag::R, n).unwrap();
        let mut s = Sampler::new(seed);
        let v0 = random_v0(&mut s, m.dim_v());
        let rec = classify_subspace(&m, &v0, &Tolerance::default(), 16, seed).unwrap();
        prop_assert!(!rec.verdict.is_non_tg(), "{rec}");
    }

    #[test]
    fn admissible_families_classify_as_stated(m in model(), phi in 0.05..1.5f64, pick in any::<prop::sample::Index>()) {
        let fams = enumerate_admissible(&m);
        prop_assume!(!fams.is_empty());
        let fam = &fams[pick.index(fams.len())];
        let w = construct(&fam.spec(phi).unwrap()).unwrap();
        prop_assert!((w.basis().transpose() * w.basis() - Matrix::identity(w.dim(), w.dim())).amax() < 1e-10);
        prop_assert_eq!(w.dim(), fam.codim);
        let rec = classify_subspace(&m, &w.complement(), &Tolerance::default(), 32, 3).unwrap();
        if fam.totally_geodesic {
            prop_assert!(rec.verdict.is_tg(), "{rec}");
        } else {
            prop_assert!(rec.verdict.is_non_tg(), "{} {rec}", fam.label);
            if fam.phi_range.is_some() {
                prop_assert!((rec.verdict.moduli_coord().unwrap() - phi).abs() < 1e-6, "{rec}");
            }
        }
    }
}

#[test]
fn kangle_degenerates_at_the_ends() {
    let m = SolvableModel::parse("C:4").unwrap();
    let j = ComplexStructure::new(m.complex_structure().unwrap()).unwrap();
    let tol = Tolerance::default();
    let zero = construct(&FamilySpec::new(FamilyLabel::Kangle, m, 1, Some(0.0)).unwrap()).unwrap();
    let r = kahler_constancy(&zero, &j, &tol).unwrap();
    assert!(r.constant && r.phi.abs() < 1e-8);
    let right = construct(&FamilySpec::new(FamilyLabel::Kangle, m, 1, Some(FRAC_PI_2)).unwrap()).unwrap();
    let r = kahler_constancy(&right, &j, &tol).unwrap();
    assert!(r.constant && (r.phi - FRAC_PI_2).abs() < 1e-8);
}

#[test]
fn family_e_tends_to_family_b() {
    let m = SolvableModel::parse("H:3").unwrap();
    let q = quaternionic(&m);
    let e = construct(&FamilySpec::new(FamilyLabel::E, m, 1, Some(0.0)).unwrap()).unwrap();
    let b = construct(&FamilySpec::new(FamilyLabel::B, m, 1, None).unwrap()).unwrap();
    let te = qk_constancy(&e, &q, 64, 5).unwrap();
    let tb = qk_constancy(&b, &q, 64, 5).unwrap();
    assert!(te.distance(&tb.phi) < 1e-8);
}

#[test]
fn sampling_is_deterministic() {
    let a = Sampler::new(9).frame(7, 3);
    let b = Sampler::new(9).frame(7, 3);
    assert_eq!(a, b);
    let m = SolvableModel::parse("H:3").unwrap();
    let w = Subspace::from_orthonormal(Sampler::new(4).frame(8, 3)).unwrap();
    let ta = qk_constancy(&w, &quaternionic(&m), 64, 42).unwrap();
    let tb = qk_constancy(&w, &quaternionic(&m), 64, 42).unwrap();
    assert_eq!(ta.phi, tb.phi);
    assert_eq!(ta.constancy_defect.to_bits(), tb.constancy_defect.to_bits());
}
