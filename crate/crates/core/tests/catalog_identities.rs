use std::collections::BTreeMap;

use gaussmap_core::catalog::{self, CatalogEntry};
use gaussmap_core::chart::FDConfig;
use gaussmap_core::identities::{run_all, run_check, GridSpec};
use proptest::prelude::*;

fn entry(name: &str, kv: &[(&str, f64)]) -> CatalogEntry {
    let p: BTreeMap<String, f64> = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    catalog::get(name, &p).unwrap()
}

fn passes(e: &CatalogEntry, id: &str, grid: &GridSpec) -> Result<(), TestCaseError> {
    for r in run_check(id, e, grid, &FDConfig::default(), 1.0).unwrap() {
        prop_assert!(r.pass, "{} {} max {:e}", e.name, r.check_id, r.max_residual);
    }
    Ok(())
}

#[test]
fn every_default_entry_passes_every_check() {
    let grid = GridSpec::new(vec![3, 3], 0.05);
    for name in catalog::list() {
        let e = catalog::get_default(name).unwrap();
        let results = run_all(&e, &grid, &FDConfig::default(), 1.0);
        assert!(results.len() >= 20, "{name}");
        for r in results {
            assert!(r.pass, "{name} {} {:e}", r.check_id, r.max_residual);
        }
    }
}

#[test]
fn richardson_keeps_every_check_passing() {
    let cfg = FDConfig {
        richardson: true,
        ..FDConfig::default()
    };
    let e = catalog::get_default("torus").unwrap();
    for r in run_all(&e, &GridSpec::new(vec![3, 3], 0.05), &cfg, 1.0) {
        assert!(r.pass, "{} {:e}", r.check_id, r.max_residual);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tori_satisfy_gauss_and_jacobi(big in 1.5f64..3.0, r in 0.2f64..0.8) {
        let e = entry("torus", &[("R", big), ("r", r)]);
        let grid = GridSpec::new(vec![3, 3], 0.05);
        for id in ["gauss-derivative", "mean-curvature", "jacobi-general", "jacobi-hypersurface", "expected-facts"] {
            passes(&e, id, &grid)?;
        }
    }

    #[test]
    fn catenoids_and_helicoids_are_monogenic(c in 0.3f64..3.0) {
        let grid = GridSpec::new(vec![3, 3], 0.05);
        for name in ["catenoid", "helicoid"] {
            passes(&entry(name, &[("c", c)]), "minimal-monogenic", &grid)?;
        }
    }

    #[test]
    fn graphs_match_closed_form_curvature(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d in -1.0f64..1.0) {
        let e = entry("graph", &[("a", a), ("b", b), ("c", c), ("d", d)]);
        let grid = GridSpec::new(vec![3, 3], 0.05);
        for id in ["expected-facts", "gauss-derivative", "boxed-decomposition", "jacobi-hypersurface/field-equation"] {
            passes(&e, id, &grid)?;
        }
    }

    #[test]
    fn spheres_have_parallel_mean_curvature(r in 0.3f64..4.0, three in any::<bool>()) {
        let m = if three { 3.0 } else { 2.0 };
        let e = entry("sphere", &[("r", r), ("m", m)]);
        let grid = GridSpec::new(vec![2, 2], 0.1);
        for id in ["parallel-curlfree", "graded-laplace-gauss", "expected-facts"] {
            passes(&e, id, &grid)?;
        }
    }
}
