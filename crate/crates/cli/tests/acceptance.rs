//! Acceptance criteria 1 to 8, one line each. Exits nonzero if any fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cognate::eval::eval_closed;
use cognate::eval::foreign::ForeignRegistry;
use cognate::graph::LabelledGraph;
use cognate::lang::{erase, ConstructorSig, PlainTerm};
use cognate::query::relation::{check_conjugate_on, check_galois_on};
use cognate::query::{
    self, check_conjugate, check_galois, de_morgan_dual, suffices_checked, QueryError, QueryOp,
    Restriction, SelectionFn, Step,
};
use cognate::session::{dataset, run_source, Dataset};
use cognate::surface::{self, ast::Item, check_clauses, ClauseProblem};
use cognate::{Address, DepGraph, Selection, Universe};
use cognate_cli::bench::{run_suite, Category, Suite};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn programs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../programs"))
}

fn read(name: &str) -> String {
    std::fs::read_to_string(programs().join(name)).expect("program file")
}

fn a(i: u32) -> Address {
    Address(i)
}

// 1

fn mavg_reference() -> LabelledGraph {
    let labels = [
        "18.17", "22.13", "37.14", "61.27", "2.00", "3.00", "40.30", "40.30", "77.44", "59.27",
        "120.54", "20.15", "25.81", "40.18",
    ];
    let edges = [
        (0, 6),
        (1, 6),
        (6, 11),
        (4, 11),
        (0, 7),
        (1, 7),
        (7, 8),
        (2, 8),
        (8, 12),
        (5, 12),
        (1, 9),
        (2, 9),
        (3, 10),
        (9, 10),
        (10, 13),
        (5, 13),
    ];
    LabelledGraph::new(labels.iter().map(|s| s.to_string()).collect(), edges)
}

fn moving_average() -> Outcome {
    let start = Instant::now();
    let data = Dataset::new(
        "data",
        dataset::parse_csv(&read("emissions.csv")).map_err(|e| e.to_string())?,
    );
    let s = run_source(&read("mavg.cog"), &[data], &ForeignRegistry::primitives())
        .map_err(|e| e.to_string())?;
    let xs: Vec<f64> = s
        .plain()
        .as_list()
        .ok_or("result is not a list")?
        .iter()
        .map(|x| x.as_f64().ok_or("non-numeric element"))
        .collect::<Result<_, _>>()?;
    let expected = [
        (18.17 + 22.13) / 2.0,
        (18.17 + 22.13 + 37.14) / 3.0,
        (22.13 + 37.14 + 61.27) / 3.0,
    ];
    ensure(xs.len() == 3, || format!("{} elements", xs.len()))?;
    for (x, e) in xs.iter().zip(expected) {
        ensure((x - e).abs() < 1e-9, || format!("{x} vs {e}"))?;
    }
    let shown: Vec<String> = xs.iter().map(|x| format!("{x:.2}")).collect();
    ensure(shown == ["20.15", "25.81", "40.18"], || {
        format!("{shown:?}")
    })?;
    let (g, _) = s.numeric_subgraph(2);
    ensure(g.edges.len() == 16, || format!("{} edges", g.edges.len()))?;
    ensure(g.is_isomorphic(&mavg_reference()), || {
        "not isomorphic to the reference graph".into()
    })?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("{shown:?}, 16 edges, isomorphic, {took:.0?}"))
}

// Random corpus with an independent reachability oracle.

struct Case {
    g: DepGraph,
    /// reach[i][j]: a path from vertex i to vertex j, reflexive.
    reach: Vec<Vec<bool>>,
    sources: Vec<u32>,
    sinks: Vec<u32>,
}

fn corpus() -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..1000)
        .map(|_| {
            let n = rng.gen_range(1..=12usize);
            let density = rng.gen_range(0.1..0.5);
            // Vertex order is a random topological order over shuffled addresses.
            let mut ids: Vec<u32> = (0..n as u32).collect();
            ids.shuffle(&mut rng);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(density) {
                        edges.push((ids[i], ids[j]));
                    }
                }
            }
            let mut reach = vec![vec![false; n]; n];
            for (v, row) in reach.iter_mut().enumerate() {
                row[v] = true;
            }
            // Warshall closure.
            for &(x, y) in &edges {
                reach[x as usize][y as usize] = true;
            }
            for k in 0..n {
                let via = reach[k].clone();
                for row in reach.iter_mut().filter(|row| row[k]) {
                    for (r, &v) in row.iter_mut().zip(&via) {
                        *r |= v;
                    }
                }
            }
            let has_in: BTreeSet<u32> = edges.iter().map(|e| e.1).collect();
            let has_out: BTreeSet<u32> = edges.iter().map(|e| e.0).collect();
            let all: Vec<u32> = (0..n as u32).collect();
            Case {
                g: DepGraph::from_parts(
                    all.iter().map(|&i| a(i)),
                    edges.iter().map(|&(x, y)| (a(x), a(y))),
                ),
                reach,
                sources: all
                    .iter()
                    .copied()
                    .filter(|v| !has_in.contains(v))
                    .collect(),
                sinks: all
                    .iter()
                    .copied()
                    .filter(|v| !has_out.contains(v))
                    .collect(),
            }
        })
        .collect()
}

impl Case {
    fn sel(&self, u: Universe, xs: &[u32]) -> Selection {
        Selection::from_addresses(u, xs.iter().map(|&i| a(i)))
    }

    fn subsets(&self, of: &[u32], u: Universe) -> Vec<Selection> {
        let mut out: Vec<Selection> = of.iter().map(|&x| self.sel(u, &[x])).collect();
        if of.len() <= 6 {
            for mask in 0u32..1 << of.len() {
                let xs: Vec<u32> = (0..of.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| of[i])
                    .collect();
                out.push(self.sel(u, &xs));
            }
        }
        out
    }

    fn image(&self, x: &Selection) -> Selection {
        let ts: Vec<u32> = self
            .sinks
            .iter()
            .copied()
            .filter(|&t| x.iter().any(|s| self.reach[s.0 as usize][t as usize]))
            .collect();
        self.sel(Universe::Sinks, &ts)
    }

    fn dual_image(&self, x: &Selection) -> Selection {
        let ts: Vec<u32> = self
            .sinks
            .iter()
            .copied()
            .filter(|&t| {
                self.sources
                    .iter()
                    .all(|&s| !self.reach[s as usize][t as usize] || x.contains(a(s)))
            })
            .collect();
        self.sel(Universe::Sinks, &ts)
    }

    fn preimage(&self, y: &Selection) -> Selection {
        let ss: Vec<u32> = self
            .sources
            .iter()
            .copied()
            .filter(|&s| y.iter().any(|t| self.reach[s as usize][t.0 as usize]))
            .collect();
        self.sel(Universe::Sources, &ss)
    }
}

fn algorithm_vs_oracle(corpus: &[Case]) -> Outcome {
    let start = Instant::now();
    let mut checks = 0usize;
    for (n, c) in corpus.iter().enumerate() {
        for x in c.subsets(&c.sources, Universe::Sources) {
            let db = query::demanded_by(c.g.view(), &x).map_err(|e| e.to_string())?;
            ensure(db == c.image(&x), || {
                format!("graph {n}: demanded_by {x:?}")
            })?;
            let sf = query::suffices(c.g.view(), &x).map_err(|e| e.to_string())?;
            ensure(sf == c.dual_image(&x), || {
                format!("graph {n}: suffices {x:?}")
            })?;
            checks += 2;
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!(
        "{} graphs, {checks} comparisons, 0 mismatches, {took:.0?}",
        corpus.len()
    ))
}

fn derived_table(corpus: &[Case]) -> Outcome {
    type Q = fn(&DepGraph, &Selection) -> Result<Selection, QueryError>;
    let forward: [(&str, Q, Q); 2] = [
        (
            "demandedBy",
            |g, x| query::demanded_by(g.view(), x),
            query::demanded_by_via_suffices,
        ),
        (
            "suffices",
            |g, x| query::suffices(g.view(), x),
            query::suffices_via_demanded_by,
        ),
    ];
    let backward: [(&str, Q, Q); 2] = [
        ("demands", query::demands, query::demands_via_suffices),
        (
            "onlyNeededFor",
            query::only_needed_for,
            query::only_needed_for_via_demanded_by,
        ),
    ];
    let mut checks = 0usize;
    for (n, c) in corpus.iter().enumerate() {
        for (ops, xs) in [
            (&forward, c.subsets(&c.sources, Universe::Sources)),
            (&backward, c.subsets(&c.sinks, Universe::Sinks)),
        ] {
            for x in &xs {
                for (name, direct, dual) in ops.iter() {
                    let l = direct(&c.g, x).map_err(|e| e.to_string())?;
                    let r = dual(&c.g, x).map_err(|e| e.to_string())?;
                    ensure(l == r, || {
                        format!("graph {n}: {name} {x:?}: {l:?} vs {r:?}")
                    })?;
                    checks += 1;
                }
            }
        }
        // The backward operators also match the oracle preimage.
        for y in c.subsets(&c.sinks, Universe::Sinks) {
            let d = query::demands(&c.g, &y).map_err(|e| e.to_string())?;
            ensure(d == c.preimage(&y), || format!("graph {n}: demands {y:?}"))?;
        }
    }
    Ok(format!("4 operators, {checks} comparisons, 0 mismatches"))
}

fn random_pairs(c: &Case, rng: &mut ChaCha8Rng) -> Vec<(Selection, Selection)> {
    let pick = |rng: &mut ChaCha8Rng, of: &[u32], u: Universe| {
        let xs: Vec<u32> = of.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        c.sel(u, &xs)
    };
    (0..256)
        .map(|_| {
            (
                pick(rng, &c.sources, Universe::Sources),
                pick(rng, &c.sinks, Universe::Sinks),
            )
        })
        .collect()
}

fn conjugacy_and_galois(corpus: &[Case]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut exhaustive, mut sampled) = (0, 0);
    for (n, c) in corpus.iter().enumerate() {
        let (s, t) = (c.g.sources(), c.g.sinks());
        let g = &c.g;
        let db = || {
            SelectionFn::fallible(s.clone(), t.clone(), move |x| {
                query::demanded_by(g.view(), x)
            })
        };
        let dm = || SelectionFn::fallible(t.clone(), s.clone(), move |y| query::demands(g, y));
        match (
            check_conjugate(&db(), &dm()),
            check_galois(&db(), &de_morgan_dual(dm())),
        ) {
            (Ok(conj), Ok(gal)) => {
                ensure(conj, || format!("graph {n}: not conjugate"))?;
                ensure(gal, || format!("graph {n}: not a Galois connection"))?;
                exhaustive += 1;
            }
            (Err(QueryError::Budget { .. }), _) | (_, Err(QueryError::Budget { .. })) => {
                let pairs = random_pairs(c, &mut rng);
                ensure(check_conjugate_on(&db(), &dm(), &pairs), || {
                    format!("graph {n}: not conjugate")
                })?;
                ensure(
                    check_galois_on(&db(), &de_morgan_dual(dm()), &pairs),
                    || format!("graph {n}: not a Galois connection"),
                )?;
                sampled += 1;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.to_string()),
        }
    }
    Ok(format!("{exhaustive} graphs exhaustive, {sampled} sampled"))
}

fn inflation(corpus: &[Case]) -> Outcome {
    let mut tested = 0;
    for (n, c) in corpus.iter().enumerate() {
        let isolated = c.sources.iter().any(|s| c.sinks.contains(s));
        if isolated {
            continue;
        }
        for x in c.subsets(&c.sources, Universe::Sources) {
            let l = query::linked_inputs(&c.g, &x).map_err(|e| e.to_string())?;
            ensure(x.is_subset(&l), || {
                format!("graph {n}: {x:?} not within {l:?}")
            })?;
            tested += 1;
        }
    }
    // An input cell that no output cell uses is lost.
    let g = DepGraph::from_parts((0..4).map(a), [(a(0), a(2)), (a(1), a(3))]);
    let r = Restriction::new(
        Selection::from_addresses(Universe::Sources, [a(0), a(1)]),
        Selection::from_addresses(Universe::Sinks, [a(2)]),
    );
    let x = Selection::from_addresses(Universe::Sources, [a(1)]);
    let l = QueryOp::LinkedInputs
        .run_restricted(&g, &x, &r)
        .map_err(|e| e.to_string())?;
    ensure(!x.is_subset(&l), || {
        "negative case preserved its input".into()
    })?;
    Ok(format!(
        "{tested} selections inflate; unused input dropped under restriction"
    ))
}

fn suffices_trace() -> Outcome {
    let edges = [(1, 5), (2, 5), (3, 6), (3, 7), (4, 7), (5, 6)];
    let g = DepGraph::from_parts((1..=7).map(a), edges.iter().map(|&(x, y)| (a(x), a(y))));
    let x = Selection::from_addresses(Universe::Sources, [a(1), a(2), a(3)]);
    let (out, trace) = suffices_checked(g.view(), &x).map_err(|e| e.to_string())?;
    let want = Selection::from_addresses(Universe::Sinks, [a(6)]);
    ensure(out == want, || format!("got {out:?}"))?;
    let pending = trace
        .iter()
        .filter(|s| matches!(s, Step::Pending(_)))
        .count();
    let extend = trace
        .iter()
        .filter(|s| matches!(s, Step::Extend(_)))
        .count();
    ensure(pending == 4 && extend == 2, || format!("trace {trace:?}"))?;
    Ok(format!("{{x6}}, invariant held over {} steps", trace.len()))
}

// 7

const BAZ: &str = "def baz (Cons y ys) x = x : y : ys;\ndef baz Nil x = [x];";
const FOO: &str = "def foo (Cons y ys) (Cons z zs) = 1;\ndef foo x Nil = 2;";
const BAR: &str = "def bar x y = x;\ndef bar y x = y;";

fn clauses(src: &str) -> Result<Vec<surface::ast::Clause>, String> {
    let p = surface::parse(&format!("{src}\n0")).map_err(|e| e.to_string())?;
    match &p.items[0] {
        Item::Defs(defs) => Ok(defs[0].clauses.clone()),
        _ => Err("expected definitions".into()),
    }
}

fn eval_plain(src: &str) -> Result<PlainTerm, String> {
    let e = surface::compile(src).map_err(|e| e.to_string())?;
    Ok(erase(&eval_closed(&e).map_err(|e| e.to_string())?.0))
}

fn desugaring() -> Outcome {
    let sig = ConstructorSig::default();
    check_clauses(&clauses(BAZ)?, &sig).map_err(|d| format!("baz: {d:?}"))?;
    ensure(
        eval_plain(&format!("{BAZ}\nbaz [1, 2] 0"))?.to_string() == "[0, 1, 2]",
        || "baz result".into(),
    )?;
    let misaligned = check_clauses(&clauses(FOO)?, &sig)
        .err()
        .ok_or("foo accepted")?;
    ensure(
        matches!(misaligned[0].problem, ClauseProblem::Misaligned(_)),
        || format!("{misaligned:?}"),
    )?;
    let renamed = check_clauses(&clauses(BAR)?, &sig)
        .err()
        .ok_or("bar accepted")?;
    ensure(
        matches!(renamed[0].problem, ClauseProblem::VariableNames(_)),
        || format!("{renamed:?}"),
    )?;

    for name in ["mavg.cog", "gaussian.cog", "matmul.cog"] {
        let src = read(name);
        let x = surface::compile(&src).map_err(|e| e.to_string())?;
        let y = surface::compile(&src).map_err(|e| e.to_string())?;
        ensure(x == y, || format!("{name} desugars differently"))?;
    }

    let cases: [(&str, &[&str]); 5] = [
        ("length", &["[]", "[1]", "[1, 2, 3]"]),
        ("append", &["[] [1]", "[1, 2] []", "[1] [2, 3]"]),
        ("zip", &["[] [1]", "[1, 2] [\"a\"]", "[1, 2] [3, 4]"]),
        ("take", &["0 [1, 2]", "2 [1, 2, 3]", "5 [1]"]),
        ("insert", &["3 []", "3 [1, 2, 4, 5]", "0 [1]", "9.5 [1, 2]"]),
    ];
    for (f, inputs) in cases {
        let piecewise = read(&format!("phrasings/{f}.piecewise.cog"));
        let explicit = read(&format!("phrasings/{f}.match.cog"));
        for args in inputs {
            let l = eval_plain(&format!("{piecewise}\n{f} {args}"))?;
            let r = eval_plain(&format!("{explicit}\n{f} {args}"))?;
            ensure(l == r, || format!("{f} {args}: {l} vs {r}"))?;
        }
    }
    Ok("baz accepted, foo and bar rejected, deterministic, 5 phrasings agree".into())
}

fn benchmarks() -> Outcome {
    let start = Instant::now();
    let (suite, base) = Suite::load(&programs().join("suite.toml")).map_err(|e| e.to_string())?;
    let report = run_suite(&suite, &base, None);
    println!("{report}");
    ensure(report.entries.len() == 8, || {
        format!("{} entries", report.entries.len())
    })?;
    let measured: Vec<_> = report.measured().collect();
    ensure(measured.len() == 8, || {
        let failed: Vec<_> = report.entries.iter().map(|e| e.name()).collect();
        format!("only {} of {failed:?} completed", measured.len())
    })?;
    for m in &measured {
        ensure(m.eval.runs == 10 && m.demands.runs == 10, || {
            format!("{}: runs", m.name)
        })?;
        ensure(m.demands.category == Category::Instantaneous, || {
            format!("{}: demands took {:.3} ms", m.name, m.demands.mean_ms)
        })?;
        ensure(m.agree, || {
            format!("{}: demandedBy routes disagree", m.name)
        })?;
    }
    let wins = report.direct_wins();
    ensure(wins >= 6, || {
        format!("direct demBy faster on only {wins} of 8")
    })?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(300), || format!("took {took:?}"))?;
    Ok(format!(
        "8 entries, demands instantaneous, direct faster on {wins} of 8, {took:.1?}"
    ))
}

fn main() {
    let corpus = corpus();
    let criteria: [(&str, &dyn Fn() -> Outcome); 8] = [
        ("moving average", &moving_average),
        ("algorithms vs oracle", &|| algorithm_vs_oracle(&corpus)),
        ("derived table", &|| derived_table(&corpus)),
        ("conjugacy and Galois", &|| conjugacy_and_galois(&corpus)),
        ("inflation", &|| inflation(&corpus)),
        ("suffices trace", &suffices_trace),
        ("desugaring", &desugaring),
        ("benchmarks", &benchmarks),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
