use std::sync::OnceLock;

use hypaffine::bicombing::{Bicombing, BicombingKind};
use hypaffine::espace::{cocycle, norm_e, op_norm_lower_bound, uniform_bound, OptimizerConfig};
use hypaffine::group::{Group, GroupOptions, Presentation};
use hypaffine::kernel::{
    cnd_min_eigenvalue, kernel_cross_validate, kernel_from_bicombing, replay_two_triangle_bound,
};
use hypaffine::{Kernel, Kernel32, Rational};

const SURFACE: &str = "generators: a b c d\nrelators: abABcdCD\nmode: dehn\n";

fn surface() -> &'static Group {
    static G: OnceLock<Group> = OnceLock::new();
    G.get_or_init(|| {
        let options = GroupOptions {
            index_radius: 6,
            ..GroupOptions::default()
        };
        Group::new(Presentation::parse(SURFACE).unwrap(), options).unwrap()
    })
}

#[test]
fn cross_validation_on_the_larger_balls() {
    let f2 = Group::free(2);
    let tree = Bicombing::new(&f2, BicombingKind::TreeGeodesic).unwrap();
    assert_eq!(
        kernel_cross_validate(&tree, &f2.ball(3).unwrap()).unwrap(),
        Rational::from_integer(0)
    );
    let g = surface();
    let anti = Bicombing::new(g, BicombingKind::ShortlexAntisymmetrized).unwrap();
    assert_eq!(
        kernel_cross_validate(&anti, &g.ball(2).unwrap()).unwrap(),
        Rational::from_integer(0)
    );
}

#[test]
fn tree_kernel_on_ball_three_is_cnd() {
    let f2 = Group::free(2);
    let tree = Bicombing::new(&f2, BicombingKind::TreeGeodesic).unwrap();
    let k: Kernel = kernel_from_bicombing(&tree, &f2.ball(3).unwrap()).unwrap();
    let all: Vec<usize> = (0..k.len()).collect();
    assert!(cnd_min_eigenvalue(&k, &all).unwrap() >= -1e-9);
}

#[test]
fn translation_by_a_on_ball_two_is_bounded_by_triangle_areas() {
    let g = surface();
    let b = Bicombing::new(g, BicombingKind::ShortlexAntisymmetrized).unwrap();
    let k: Kernel = kernel_from_bicombing(&b, &g.ball(3).unwrap()).unwrap();
    let support: Vec<usize> = g
        .ball(2)
        .unwrap()
        .elements()
        .iter()
        .map(|x| k.index_of(x).unwrap())
        .collect();
    let a = g.element("a").unwrap();
    let replay = replay_two_triangle_bound(&b, &k, &a, &support).unwrap();
    assert_eq!(replay.pairs, 65 * 64);
    assert!(replay.violations.is_empty());
    assert!(replay.max_excess <= replay.max_area_sum);
}

#[test]
fn single_precision_follows_the_norm_formula() {
    let g = surface();
    let b = Bicombing::new(g, BicombingKind::ShortlexAntisymmetrized).unwrap();
    let k: Kernel32 = kernel_from_bicombing(&b, &g.ball(2).unwrap()).unwrap();
    for (i, s) in k.elements().iter().enumerate().skip(1) {
        let want = k.value(i, 0).sqrt() + 2.0;
        assert!((norm_e(&cocycle(s), &k).unwrap() - want).abs() <= 1e-5);
    }
    let support = g.ball(1).unwrap().elements().to_vec();
    let config = OptimizerConfig {
        restarts: 2,
        iterations: 100,
        ..OptimizerConfig::default()
    };
    let est = op_norm_lower_bound(&k, g, &g.element("a").unwrap(), &support, &config).unwrap();
    assert!(est.best <= uniform_bound(k.displacement_constant()).unwrap() + 1e-5);
}
