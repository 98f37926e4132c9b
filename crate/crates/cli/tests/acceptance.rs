//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use coalflow::analyze::{conflicting, conflicts};
use coalflow::compose::{append, merge};
use coalflow::{
    AclEntry, AclPolicy, CommonRepresentation, Flow, GrantResult, InterfaceId, LatticePolicy, Mode, Privilege,
    RbacPolicy, RbacSemantics,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<(), String>;
type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coalflow"))
        .args(args)
        .output()
        .expect("failed to spawn coalflow")
}

fn run_json(args: &[&str]) -> Result<Value, String> {
    let out = run(args);
    ensure!(
        out.status.code() == Some(0),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn x(e: &str, m: Mode) -> InterfaceId {
    InterfaceId::explicit(e, m)
}

fn imp(n: &str) -> InterfaceId {
    InterfaceId::implicit(n, "x")
}

fn flow(a: InterfaceId, b: InterfaceId) -> Flow {
    Flow::new(a, b).unwrap()
}

fn small_cr(names: &[&str], flows: &[(&str, &str)]) -> CommonRepresentation {
    CommonRepresentation::new(
        names.iter().map(|n| imp(n)),
        flows.iter().map(|(a, b)| flow(imp(a), imp(b))),
    )
}

fn random_cr(rng: &mut ChaCha8Rng, universe: &[InterfaceId]) -> CommonRepresentation {
    let density = rng.gen_range(0.05..0.6);
    let present: Vec<&InterfaceId> = universe.iter().filter(|_| rng.gen_bool(0.7)).collect();
    let mut flows = Vec::new();
    for a in &present {
        for b in &present {
            if a != b && rng.gen_bool(density) {
                flows.push(flow((*a).clone(), (*b).clone()));
            }
        }
    }
    CommonRepresentation::new(present.into_iter().cloned(), flows)
}

fn universe8() -> Vec<InterfaceId> {
    vec![
        x("a", Mode::R),
        x("a", Mode::W),
        x("b", Mode::R),
        x("b", Mode::W),
        imp("c"),
        imp("d"),
        InterfaceId::implicit("d", "y"),
        imp("e"),
    ]
}

fn matrix_golden() -> Outcome {
    let first = run(&["translate", &fixture("matrix_acl.json")]);
    let second = run(&["translate", &fixture("matrix_acl.json")]);
    ensure!(first.status.code() == Some(0), "translate failed");
    ensure!(first.stdout == second.stdout, "output differs between runs");

    let cr = CommonRepresentation::from_json(std::str::from_utf8(&first.stdout).unwrap()).map_err(|e| e.to_string())?;
    ensure!(cr.interfaces().len() == 12, "expected 12 interfaces, got {}", cr.interfaces().len());
    use Mode::{R, W};
    let expected: BTreeSet<Flow> = [
        (("s1", R), ("o2", W)),
        (("s1", R), ("o3", W)),
        (("s2", R), ("o2", W)),
        (("s3", R), ("o1", W)),
        (("o1", R), ("s1", W)),
        (("o3", R), ("s1", W)),
        (("o3", R), ("s2", W)),
        (("o1", R), ("s3", W)),
        (("o3", R), ("s3", W)),
    ]
    .into_iter()
    .map(|(a, b)| flow(x(a.0, a.1), x(b.0, b.1)))
    .collect();
    ensure!(cr.flows() == &expected, "flow set mismatch: {:?}", cr.flows());
    ensure!(cr.to_json().as_bytes() == first.stdout.as_slice(), "output is not canonical");
    Ok(())
}

fn worked_conflict() -> Outcome {
    let v = run_json(&["analyze", &fixture("cr1.json"), &fixture("cr2.json")])?;
    ensure!(v["outcome"]["conflicting"] == true, "conflicting should be true");
    let want = serde_json::to_value([flow(imp("a"), imp("c"))]).unwrap();
    ensure!(v["outcome"]["conflicts"] == want, "conflicts = {}", v["outcome"]["conflicts"]);

    let cr1 = small_cr(&["a", "b", "c"], &[("a", "c"), ("b", "c")]);
    let cr2 = small_cr(&["a", "c", "d"], &[("a", "d"), ("d", "c")]);
    ensure!(conflicts(&cr1, &cr2) == BTreeSet::from([flow(imp("a"), imp("c"))]), "library conflicts differ");
    ensure!(conflicting(&cr1, &cr2), "library conflicting should be true");
    Ok(())
}

fn composite_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = universe8();
    let empty = CommonRepresentation::empty();
    for n in 0..1000 {
        let (a, b, c) = (random_cr(&mut rng, &u), random_cr(&mut rng, &u), random_cr(&mut rng, &u));
        ensure!(merge(&a, &b) == merge(&b, &a), "merge not commutative (case {n})");
        ensure!(merge(&merge(&a, &b), &c) == merge(&a, &merge(&b, &c)), "merge not associative (case {n})");
        ensure!(merge(&a, &a) == a, "merge not idempotent (case {n})");
        ensure!(merge(&a, &empty) == a && merge(&empty, &a) == a, "empty is not the identity (case {n})");
        let app = append(&a, &b);
        ensure!(a.flows().is_subset(app.flows()), "flows(a) ⊄ flows(append) (case {n})");
        ensure!(app.flows().is_subset(merge(&a, &b).flows()), "flows(append) ⊄ flows(merge) (case {n})");
    }
    let fwd = small_cr(&["x", "y"], &[("x", "y")]);
    let bwd = small_cr(&["x", "y"], &[("y", "x")]);
    ensure!(append(&fwd, &bwd) == fwd, "append(A, B) should equal A");
    ensure!(append(&bwd, &fwd) == bwd, "append(B, A) should equal B");
    Ok(())
}

fn translation_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);

    // ACL and capability lists against triple enumeration
    for n in 0..300 {
        let no = rng.gen_range(1..=5);
        let ns = rng.gen_range(1..=5);
        let objects: Vec<String> = (0..no).map(|k| format!("o{k}")).collect();
        let subjects: Vec<String> = (0..ns).map(|k| format!("s{k}")).collect();
        let mut granted = BTreeSet::new();
        let mut entries: BTreeMap<String, BTreeSet<AclEntry>> = BTreeMap::new();
        for o in &objects {
            for s in &subjects {
                for m in [Mode::R, Mode::W] {
                    if rng.gen_bool(0.4) {
                        granted.insert((o.clone(), s.clone(), m));
                        entries.entry(o.clone()).or_default().insert(AclEntry { subject: s.clone(), mode: m });
                    }
                }
            }
        }
        let p = AclPolicy {
            objects: objects.iter().cloned().collect(),
            subjects: subjects.iter().cloned().collect(),
            entries,
        };
        let mut expected = BTreeSet::new();
        for (o, s, m) in &granted {
            expected.insert(match m {
                Mode::W => flow(x(s, Mode::R), x(o, Mode::W)),
                Mode::R => flow(x(o, Mode::R), x(s, Mode::W)),
            });
        }
        let acl_cr = p.to_cr().map_err(|e| e.to_string())?;
        let cap_cr = p.transpose().to_cr().map_err(|e| e.to_string())?;
        ensure!(acl_cr.flows() == &expected, "ACL flows differ from enumeration (case {n})");
        ensure!(cap_cr == acl_cr, "capability route differs (case {n})");
        ensure!(acl_cr.validate().is_empty(), "ACL output malformed (case {n})");
    }

    // LBAC chains
    for n in 2..=6usize {
        let levels: Vec<String> = (0..n).map(|k| format!("l{k}")).collect();
        let p = LatticePolicy {
            labels: levels.iter().cloned().collect(),
            order: levels.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect(),
            entities: (0..n).map(|k| format!("e{k}")).collect(),
            labelling: (0..n).map(|k| (format!("e{k}"), levels[k].clone())).collect(),
        };
        let got = p.to_cr().map_err(|e| e.to_string())?.flows().len();
        ensure!(got == n * (n - 1) / 2, "chain of {n}: {got} flows");
    }

    // RBAC closure against DFS, literal ⊆ cross-object
    for n in 0..300 {
        let roles = rng.gen_range(1..=8usize);
        let names: Vec<String> = (0..roles).map(|k| format!("r{k}")).collect();
        let mut hierarchy = Vec::new();
        for i in 0..roles {
            for j in (i + 1)..roles {
                if rng.gen_bool(0.3) {
                    hierarchy.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        let mut assignments = BTreeMap::new();
        for r in &names {
            let privs: BTreeSet<Privilege> = (0..3)
                .flat_map(|o| [Mode::R, Mode::W].map(|m| (o, m)))
                .filter(|_| rng.gen_bool(0.3))
                .map(|(o, m)| Privilege::new(format!("obj{o}"), m))
                .collect();
            assignments.insert(r.clone(), privs);
        }
        let p = RbacPolicy {
            roles: names.iter().cloned().collect(),
            assignments,
            hierarchy: hierarchy.clone(),
        };
        let closure = p.closure().map_err(|e| e.to_string())?;
        for a in &names {
            let mut seen = BTreeSet::new();
            let mut stack = vec![a.clone()];
            while let Some(cur) = stack.pop() {
                for (s, j) in &hierarchy {
                    if *s == cur && seen.insert(j.clone()) {
                        stack.push(j.clone());
                    }
                }
            }
            for b in &names {
                let in_closure = closure.contains(&(a.clone(), b.clone()));
                ensure!(in_closure == seen.contains(b), "closure disagrees with DFS on ({a}, {b}) (case {n})");
            }
        }
        let lit = p.to_cr(RbacSemantics::Literal).map_err(|e| e.to_string())?;
        let cross = p.to_cr(RbacSemantics::CrossObject).map_err(|e| e.to_string())?;
        ensure!(lit.flows().is_subset(cross.flows()), "literal ⊄ cross-object (case {n})");
    }
    Ok(())
}

fn union_find_count(cr: &CommonRepresentation) -> usize {
    let ids: Vec<&InterfaceId> = cr.interfaces().iter().collect();
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn root(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    let pos = |i: &InterfaceId| ids.iter().position(|j| *j == i).unwrap();
    for f in cr.flows() {
        if cr.contains_flow(&f.inverse()) {
            let (a, b) = (root(&mut parent, pos(f.from())), root(&mut parent, pos(f.to())));
            parent[a] = b;
        }
    }
    (0..ids.len()).filter(|&v| root(&mut parent, v) == v).count()
}

fn liveliness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let u = universe8();
    for n in 0..1000 {
        let cr = random_cr(&mut rng, &u);
        let count = union_find_count(&cr);
        ensure!(cr.is_lively() == (count == 1), "is_lively disagrees with union-find (case {n})");
        let ag = cr.availability_graph();
        for f in cr.flows() {
            if !cr.contains_flow(&f.inverse()) {
                ensure!(!ag.has_edge(f.from(), f.to()), "one-way flow {f} produced an edge (case {n})");
            }
        }
    }
    Ok(())
}

fn grant_exhaustive() -> Outcome {
    let names = ["a", "b", "c"];
    let pairs: Vec<(usize, usize)> = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let outside = imp("z");
    for mask in 0u32..(1 << pairs.len()) {
        let present: BTreeSet<(usize, usize)> =
            pairs.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, p)| *p).collect();
        let cr = CommonRepresentation::new(
            names.iter().map(|n| imp(n)),
            present.iter().map(|&(i, j)| flow(imp(names[i]), imp(names[j]))),
        );
        for i in 0..3 {
            for j in 0..3 {
                let g = cr.grant(&imp(names[i]), &imp(names[j]));
                let want = if present.contains(&(i, j)) { GrantResult::Permit } else { GrantResult::Deny };
                ensure!(g == want, "mask {mask}: grant({}, {}) = {g}", names[i], names[j]);
            }
            ensure!(cr.grant(&imp(names[i]), &outside) == GrantResult::Undefined, "mask {mask}: expected undefined");
            ensure!(cr.grant(&outside, &imp(names[i])) == GrantResult::Undefined, "mask {mask}: expected undefined");
        }
        ensure!(cr.grant(&outside, &outside) == GrantResult::Undefined, "mask {mask}: expected undefined");
    }
    Ok(())
}

fn rule_end_to_end() -> Outcome {
    for (a, b, action) in [("both_ways.json", "none.json", "merge"), ("forward.json", "backward.json", "append")] {
        let (fa, fb) = (fixture(a), fixture(b));
        let v = run_json(&["compose", "rule", &fa, &fb, "--rule", &fixture("rule_complementary.json")])?;
        let decision = &v["outcome"]["decisions"][0];
        ensure!(decision["action_taken"] == action, "{a}+{b}: action {}", decision["action_taken"]);
        let analysis = run_json(&["analyze", &fa, &fb])?;
        ensure!(decision["evidence"] == analysis["outcome"]["conflicts"], "{a}+{b}: evidence differs from analyze");
    }
    let v = run_json(&["compose", "rule", &fixture("forward.json"), &fixture("backward.json"), "--rule", &fixture("rule_complementary.json")])?;
    let expected = serde_json::to_value(small_cr(&["x", "y"], &[("x", "y")])).unwrap();
    ensure!(v["outcome"]["result"] == expected, "append result should keep only (x, y)");
    Ok(())
}

fn cli_contract(dir: &Path) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let u = universe8();
    for n in 0..100 {
        let cr = random_cr(&mut rng, &u);
        let text = cr.to_json();
        let back = CommonRepresentation::from_json(&text).map_err(|e| e.to_string())?;
        ensure!(back == cr && back.to_json() == text, "library round trip failed (case {n})");
        let path = dir.join(format!("cr{n}.json"));
        std::fs::write(&path, &text).unwrap();
        let p = path.to_str().unwrap();
        let out = run(&["compose", "merge", p, p]);
        ensure!(out.stdout == text.as_bytes(), "CLI load/save is not the identity (case {n})");
    }

    let cases: [(i32, Vec<String>); 5] = [
        (0, vec!["analyze".into(), fixture("cr1.json"), fixture("cr2.json")]),
        (2, vec!["translate".into(), fixture("malformed.json")]),
        (3, vec!["translate".into(), fixture("lbac_cyclic.json")]),
        (
            4,
            vec![
                "compose".into(),
                "rule".into(),
                fixture("forward.json"),
                fixture("backward.json"),
                "--rule".into(),
                fixture("rule_reject.json"),
            ],
        ),
        (5, vec!["check".into(), fixture("chain.json"), "--reachable".into(), "a#x".into(), "z#x".into()]),
    ];
    for (want, args) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let got = run(&args).status.code();
        ensure!(got == Some(want), "{args:?}: exit {got:?}, expected {want}");
    }
    Ok(())
}

fn main() {
    let dir = tempfile::tempdir().expect("tempdir");
    let criteria: Vec<Criterion> = vec![
        ("1 golden access-matrix translation", Box::new(matrix_golden)),
        ("2 worked conflict example", Box::new(worked_conflict)),
        ("3 composite algebra (1000 random CRs)", Box::new(composite_algebra)),
        ("4 translation soundness oracles", Box::new(translation_soundness)),
        ("5 liveliness vs union-find", Box::new(liveliness)),
        ("6 grant tri-state, exhaustive over 3 interfaces", Box::new(grant_exhaustive)),
        ("7 compositionality rule end to end", Box::new(rule_end_to_end)),
        ("8 CLI round trip and exit codes", Box::new(move || cli_contract(dir.path()))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(()) => println!("PASS  criterion {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
