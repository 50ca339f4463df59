//! One function per command, each mapping an arity to its results.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use opk_core::bar_koszul::{bar_complex, koszul_arity_report, koszul_construction, koszul_dual_round_trip, twisted_complex};
use opk_core::combinatorics::{conjugacy_class_representatives, Permutation};
use opk_core::exact_linalg::{homology, ChainComplexData, CoefficientRing, HomologySummary, Scalar};
use opk_core::sigma_operads::{
    parse_presentation, preset_source, quadratic_dual, quadratic_quotient, OperadStructure, QuadraticPresentation,
};
use opk_core::simplicial_partition::{levelization, partition_complex, simplicial_bar};
use rayon::prelude::*;
use serde_json::json;

use crate::cache::{cache_key, cache_load, cache_store, CacheStatus};
use crate::config::{CharacterTarget, OperadSource, RunConfig};
use crate::error::CliError;
use crate::output::ArityResult;

pub struct Loaded {
    pub presentation: QuadraticPresentation,
    pub operad: Option<OperadStructure>,
    pub cache: CacheStatus,
}

fn source_text(source: &OperadSource) -> Result<String, CliError> {
    match source {
        OperadSource::Preset(name) => Ok(preset_source(name)?.to_string()),
        OperadSource::Presentation(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display()))),
    }
}

/// Parses the presentation and builds the quotient operad up to the largest
/// requested arity, through the cache when one is configured.
pub fn load_operad(config: &RunConfig, source: &OperadSource, build: bool) -> Result<Loaded, CliError> {
    let text = source_text(source)?;
    let presentation = parse_presentation(&text)?;
    if !build {
        return Ok(Loaded {
            presentation,
            operad: None,
            cache: CacheStatus::Off,
        });
    }
    let max = config.max_arity().max(presentation.max_generator_arity());
    let key = cache_key(&text, max, config.ring);
    let mut status = CacheStatus::Off;
    if let Some(dir) = &config.cache {
        match cache_load(dir, &key) {
            Ok(Some(operad)) => {
                return Ok(Loaded {
                    presentation,
                    operad: Some(operad),
                    cache: CacheStatus::Hit,
                })
            }
            Ok(None) => status = CacheStatus::Miss,
            Err(reason) => {
                eprintln!("warning: ignoring cache entry ({reason}); recomputing");
                status = CacheStatus::Invalid;
            }
        }
    }
    let operad = quadratic_quotient(&presentation, config.ring, max)?;
    if let Some(dir) = &config.cache {
        if let Err(e) = cache_store(dir, &key, &operad) {
            eprintln!("warning: could not write cache entry: {e}");
        }
    }
    Ok(Loaded {
        presentation,
        operad: Some(operad),
        cache: status,
    })
}

fn dims_of(c: &ChainComplexData) -> BTreeMap<i64, usize> {
    c.degrees().zip(c.dims().iter().copied()).collect()
}

fn with_homology(r: &mut ArityResult, h: HomologySummary) {
    r.betti = Some(h.betti);
    r.torsion = Some(h.torsion);
}

fn class_name(shape: &[usize]) -> String {
    shape.iter().map(|k| k.to_string()).collect::<Vec<_>>().join("+")
}

fn characters(n: usize, f: impl Fn(&Permutation) -> opk_core::Result<Scalar>) -> Result<BTreeMap<String, String>, CliError> {
    conjugacy_class_representatives(n)
        .into_iter()
        .map(|(shape, w)| Ok((class_name(&shape), f(&w)?.to_string())))
        .collect()
}

/// Acyclic in arities ≥ 2; the ground ring in degree 0 in arity 1.
fn is_acyclic(n: usize, h: &HomologySummary) -> bool {
    if n == 1 {
        h.torsion.is_empty() && h.betti == BTreeMap::from([(0, 1)])
    } else {
        h.is_zero()
    }
}

fn partition_result(n: usize, ring: CoefficientRing, config: &RunConfig) -> Result<ArityResult, CliError> {
    let k = partition_complex(n)?;
    let mut r = ArityResult::default();
    if config.command == "character" {
        r.characters = Some(characters(n, |w| k.top_homology_character(w))?);
        return Ok(r);
    }
    let c = k.complex().change_ring(ring)?;
    let h = homology(&c);
    let fact: usize = (1..n).product();
    r.verdict = Some(h.torsion.is_empty() && h.betti == BTreeMap::from([(n as i64 - 1, fact)]));
    r.dims = Some(dims_of(&c));
    with_homology(&mut r, h);
    Ok(r)
}

fn operad_result(n: usize, p: &OperadStructure, config: &RunConfig) -> Result<ArityResult, CliError> {
    let mut r = ArityResult::default();
    match config.command.as_str() {
        "bar" => {
            let b = bar_complex(p, n)?;
            r.dims = Some(dims_of(b.complex()));
            if config.options.dims_only != Some(true) {
                with_homology(&mut r, homology(b.complex()));
            }
        }
        "simplicial-bar" => {
            let max_dim = config.options.max_dim.unwrap_or(n.saturating_sub(1).max(1));
            let s = simplicial_bar(p, n, max_dim)?;
            r.dims = Some(dims_of(s.complex()));
            with_homology(&mut r, homology(s.complex()));
        }
        "koszul-check" => {
            let report = koszul_arity_report(p, n)?;
            r.verdict = Some(report.concentrated);
            r.details = Some(json!({ "weights": report.columns }));
        }
        "koszul-complex" => {
            let kind = config.options.kind.expect("kind is set for koszul-complex");
            let t = twisted_complex(p, kind, n)?;
            let h = homology(&t.complex);
            r.dims = Some(dims_of(&t.complex));
            r.verdict = Some(is_acyclic(n, &h));
            with_homology(&mut r, h);
        }
        "levelization" => {
            let l = levelization(p, n)?;
            let report = l.report()?;
            r.dims = Some(dims_of(l.bar.complex()));
            r.verdict = Some(report.chain_map && report.injective && report.quasi_isomorphism);
            r.details = Some(json!({
                "chain_map": report.chain_map,
                "injective": report.injective,
                "quasi_isomorphism": report.quasi_isomorphism,
                "simplicial_dims": dims_of(l.simplicial.complex()),
            }));
            with_homology(&mut r, report.bar_homology);
        }
        "character" => {
            r.characters = Some(match config.options.of {
                Some(CharacterTarget::Koszul) => {
                    let k = koszul_construction(p, n)?;
                    characters(n, |w| k.character(n, w))?
                }
                _ => characters(n, |w| p.character(n, w))?,
            });
        }
        other => return Err(CliError::Usage(format!("unknown command {other}"))),
    }
    Ok(r)
}

fn generator_dims(pres: &QuadraticPresentation) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for g in pres.generators() {
        *out.entry(g.arity).or_insert(0) += g.dim();
    }
    out
}

/// Generator and relation dimensions of P, P^! and P^!! per arity, and the
/// dimensional round trip over a field (ℚ when ℤ was requested).
fn dual_results(
    pres: &QuadraticPresentation,
    config: &RunConfig,
    emit: Option<&Path>,
) -> Result<BTreeMap<usize, ArityResult>, CliError> {
    let dual = quadratic_dual(pres)?;
    let double = quadratic_dual(&dual)?;
    if let Some(path) = emit {
        std::fs::write(path, dual.to_dsl())?;
    }
    let field = if config.ring.is_field() { config.ring } else { CoefficientRing::Rationals };
    let trip = koszul_dual_round_trip(pres, field, config.max_arity())?;
    let presentations = [&pres, &&dual, &&double];
    let gens: Vec<BTreeMap<usize, usize>> = presentations.iter().map(|p| generator_dims(p)).collect();
    let rels: Vec<BTreeMap<usize, usize>> =
        presentations.iter().map(|p| p.relation_dimensions()).collect::<opk_core::Result<_>>()?;
    let mut out = BTreeMap::new();
    for &n in &config.arities {
        let at = |m: &BTreeMap<usize, usize>| m.get(&n).copied().unwrap_or(0);
        let pairs = trip.get(&n).cloned().unwrap_or_default();
        let verdict = pairs.values().all(|(a, b)| a == b)
            && at(&gens[0]) == at(&gens[2])
            && at(&rels[0]) == at(&rels[2]);
        let r = ArityResult {
            verdict: Some(verdict),
            details: Some(json!({
                "generators": {"P": at(&gens[0]), "dual": at(&gens[1]), "double_dual": at(&gens[2])},
                "relations": {"P": at(&rels[0]), "dual": at(&rels[1]), "double_dual": at(&rels[2])},
                "round_trip_ring": field.name(),
                "round_trip": pairs.iter().map(|(s, (a, b))| (s.to_string(), json!({"koszul_dual_of_dual": a, "P": b}))).collect::<serde_json::Map<_, _>>(),
            })),
            ..ArityResult::default()
        };
        out.insert(n, r);
    }
    Ok(out)
}

pub struct Computed {
    pub results: BTreeMap<usize, ArityResult>,
    pub operad_ms: f64,
    pub compute_ms: f64,
    pub cache: CacheStatus,
}

pub fn compute(config: &RunConfig) -> Result<Computed, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let start = Instant::now();
    let loaded = match &config.operad {
        Some(source) => Some(load_operad(config, source, config.command != "dual")?),
        None => None,
    };
    let operad_ms = start.elapsed().as_secs_f64() * 1e3;
    let cache = loaded.as_ref().map_or(CacheStatus::Off, |l| l.cache);
    let start = Instant::now();
    let results = if config.command == "dual" {
        let l = loaded.as_ref().expect("dual needs a presentation");
        dual_results(&l.presentation, config, config.options.emit.as_deref())?
    } else {
        let run = |n: usize| -> Result<(usize, ArityResult), CliError> {
            let r = match loaded.as_ref().and_then(|l| l.operad.as_ref()) {
                Some(p) => operad_result(n, p, config)?,
                None => partition_result(n, config.ring, config)?,
            };
            Ok((n, r))
        };
        pool.install(|| config.arities.par_iter().map(|&n| run(n)).collect::<Result<BTreeMap<_, _>, _>>())?
    };
    Ok(Computed {
        results,
        operad_ms,
        compute_ms: start.elapsed().as_secs_f64() * 1e3,
        cache,
    })
}
