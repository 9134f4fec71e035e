use fermat_kerd2::cohomology::{bar_cohomology_dim, TwoCocycle};
use fermat_kerd2::data::{a_maps, n7, n_ell};
use fermat_kerd2::transgression::{
    flatten, invariant_homs, iota_compose_check, ker_d2, ker_d2_for, ker_d2_heisenberg,
    preset_ker_d2, pullback, structural_conditions, transport_from_uy, QuotientPreset,
};
use fermat_kerd2::{
    FpMatrix, GaloisActionData, GroupRingElement, HomologyModule, ModuleKind, Prime, Subspace,
};

fn p3() -> Prime {
    Prime::new(3).unwrap()
}

fn module(kind: ModuleKind) -> HomologyModule {
    HomologyModule::new(p3(), kind).unwrap()
}

#[test]
fn invariant_hom_dimensions_on_n7() {
    let action = GaloisActionData::builtin_p3();
    let n = n7();
    let dims: Vec<usize> = ModuleKind::ALL
        .iter()
        .map(|&k| {
            invariant_homs(&n.module, &module(k), &action)
                .unwrap()
                .dim()
        })
        .collect();
    assert_eq!(dims, [18, 10, 6]);
}

#[test]
fn kernel_dimensions_on_n7() {
    let action = GaloisActionData::builtin_p3();
    let n = n7();
    let ext = n.extension.unwrap();
    let mut dims = Vec::new();
    for kind in ModuleKind::ALL {
        let k = ker_d2_for(&n.module, &ext, &module(kind), &action).unwrap();
        assert!(k.verify().unwrap());
        let report = structural_conditions(&k).unwrap();
        assert!(report.a_in_top && report.b_zero && report.c_in_u);
        assert_eq!(report.c_in_u_invariants, kind != ModuleKind::UY);
        dims.push(k.dim());
    }
    assert_eq!(dims, [5, 1, 0]);
}

#[test]
fn uy_kernel_restricted_to_u_and_x() {
    let action = GaloisActionData::builtin_p3();
    let n = n7();
    let k = ker_d2_for(
        &n.module,
        n.extension.as_ref().unwrap(),
        &module(ModuleKind::UY),
        &action,
    )
    .unwrap();
    assert_eq!(
        transport_from_uy(&k, &module(ModuleKind::UY))
            .unwrap()
            .dim(),
        5
    );
    assert_eq!(
        transport_from_uy(&k, &module(ModuleKind::U)).unwrap().dim(),
        5
    );
    assert_eq!(
        transport_from_uy(&k, &module(ModuleKind::X)).unwrap().dim(),
        2
    );
}

#[test]
fn printed_tail_maps_are_invariant() {
    let action = GaloisActionData::builtin_p3();
    let homs = invariant_homs(&n7().module, &module(ModuleKind::UY), &action).unwrap();
    let maps = a_maps();
    let members: Vec<bool> = maps
        .iter()
        .map(|(_, m)| homs.contains_map(m).unwrap())
        .collect();
    assert_eq!(members, [false, false, false, true, true, true, true, true]);

    // The values of A11..A13 on ξ1..ξ3 are those of invariant maps.
    let on_first_three = |m: &FpMatrix| flatten(&m.submatrix(0..9, 0..3));
    let restricted: Vec<Vec<u32>> = homs.basis_maps().iter().map(on_first_three).collect();
    let restricted = Subspace::from_vectors(p3(), 27, &restricted).unwrap();
    for (_, m) in &maps[..3] {
        assert!(restricted.contains(&on_first_three(m)).unwrap());
    }

    // Hom(N2, M^Q) and A14..A18 together span a 15-dimensional part.
    let (n2, pi2) = n_ell(2).unwrap();
    let homs2 = invariant_homs(&n2.module, &module(ModuleKind::UY), &action).unwrap();
    assert_eq!(homs2.dim(), 10);
    let tail: Vec<Vec<u32>> = maps[3..].iter().map(|(_, m)| flatten(m)).collect();
    let tail = Subspace::from_vectors(p3(), 63, &tail).unwrap();
    let span = pullback(homs2.space(), 9, &pi2)
        .unwrap()
        .sum(&tail)
        .unwrap();
    assert_eq!(span.dim(), 15);
    assert!(span.is_subspace_of(homs.space()).unwrap());
}

#[test]
fn quotients_of_n7() {
    let action = GaloisActionData::builtin_p3();
    let n = n7();
    let ext = n.extension.clone().unwrap();
    for kind in ModuleKind::ALL {
        let m = module(kind);
        let full = ker_d2_for(&n.module, &ext, &m, &action).unwrap();
        for l in [1, 2, 3] {
            let (q, pi) = n_ell(l).unwrap();
            let qe = q.extension.clone().unwrap();
            assert!(iota_compose_check(&n.module, &ext, &q.module, &qe, &pi, &m, &action).unwrap());
            let small = ker_d2_for(&q.module, &qe, &m, &action).unwrap();
            let pulled = pullback(small.subspace(), m.dim(), &pi).unwrap();
            assert!(pulled.is_subspace_of(full.subspace()).unwrap());
            if l == 3 {
                assert_eq!(pulled, *full.subspace());
            }
        }
    }
}

#[test]
fn heisenberg_quotient_is_n1() {
    let action = GaloisActionData::builtin_p3();
    let (n1, _) = n_ell(1).unwrap();
    for kind in ModuleKind::ALL {
        let m = module(kind);
        let direct = ker_d2_for(&n1.module, n1.extension.as_ref().unwrap(), &m, &action).unwrap();
        let preset = preset_ker_d2(QuotientPreset::Heisenberg, &m, &action).unwrap();
        assert_eq!(direct.subspace(), preset.subspace());
        assert_eq!(
            direct.dim(),
            ker_d2_heisenberg(&action, &m).unwrap().kernel.dim()
        );
    }
}

#[test]
fn presets_at_three() {
    let action = GaloisActionData::builtin_p3();
    let top = GroupRingElement::monomial(p3(), 2, 2);
    for kind in ModuleKind::ALL {
        let m = module(kind);
        let mq = action.invariants_subspace(&m).unwrap().dim();
        for rho in 1..=3 {
            let k = preset_ker_d2(QuotientPreset::RayClass { rho }, &m, &action).unwrap();
            assert_eq!(k.dim(), rho * mq);
        }
        let cyc = preset_ker_d2(QuotientPreset::Cyclotomic, &m, &action).unwrap();
        let kum = preset_ker_d2(QuotientPreset::Kummer, &m, &action).unwrap();
        assert_eq!(cyc.dim(), kum.dim());
        let expected = if kind == ModuleKind::UY { 1 } else { 0 };
        assert_eq!(cyc.dim(), expected);
        if kind == ModuleKind::UY {
            let g = &cyc.basis_maps()[0];
            assert_eq!(g.column(0), m.coordinates(&top).unwrap());
        }
    }
}

#[test]
fn kernel_ignores_sign_and_coboundaries() {
    let action = GaloisActionData::builtin_p3();
    let n = n7();
    let ext = n.extension.clone().unwrap();
    let m = module(ModuleKind::UY);
    let homs = invariant_homs(&n.module, &m, &action).unwrap();
    let base = ker_d2(&homs, &ext).unwrap();
    assert_eq!(
        ker_d2(&homs, &ext.negate()).unwrap().subspace(),
        base.subspace()
    );

    let omega = TwoCocycle::from_presentation(&n.module, &ext).unwrap();
    assert!(omega.check_cocycle());
    assert_eq!(omega.extract_extension_data().unwrap(), ext);
    let q = omega.group().order();
    let phi: Vec<Vec<u32>> = (0..q)
        .map(|g| {
            (0..7)
                .map(|i| {
                    if g == 0 {
                        0
                    } else {
                        ((g * 5 + i * 3 + 1) % 3) as u32
                    }
                })
                .collect()
        })
        .collect();
    let shifted = omega
        .checked_add(&TwoCocycle::coboundary_of(&n.module, &phi).unwrap())
        .unwrap();
    let ext2 = shifted.extract_extension_data().unwrap();
    assert_ne!(ext2, ext);
    assert_eq!(ker_d2(&homs, &ext2).unwrap().subspace(), base.subspace());
}

#[test]
fn second_cohomology_of_n7() {
    assert_eq!(bar_cohomology_dim(&n7().module, 2).unwrap(), 9);
}

#[test]
fn n3_kernel_matches_printed_basis() {
    let action = GaloisActionData::builtin_p3();
    let uy = module(ModuleKind::UY);
    let (n3, _) = n_ell(3).unwrap();
    let k = ker_d2_for(&n3.module, n3.extension.as_ref().unwrap(), &uy, &action).unwrap();
    let map = |images: &[(usize, (usize, usize))]| {
        let mut m = FpMatrix::zeros(p3(), 9, 3);
        for &(xi, (a, b)) in images {
            let v = uy
                .coordinates(&GroupRingElement::monomial(p3(), a, b))
                .unwrap();
            for (row, &x) in v.iter().enumerate() {
                m.set(row, xi - 1, x as i64);
            }
        }
        flatten(&m)
    };
    let printed = [
        map(&[(1, (1, 2))]),
        map(&[(1, (2, 1))]),
        map(&[(1, (2, 2))]),
        map(&[(2, (2, 2))]),
        map(&[(1, (1, 1)), (3, (2, 2))]),
    ];
    assert_eq!(
        *k.subspace(),
        Subspace::from_vectors(p3(), 27, &printed).unwrap()
    );
}
