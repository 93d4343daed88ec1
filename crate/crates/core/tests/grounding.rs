mod common;

use std::collections::BTreeSet;

use hopgdp::bench::BUNDLES;
use hopgdp::model::domain::{AtomSchema, Condition, Term};
use hopgdp::model::{parse_domain, Atom, DomainModel, ProblemInstance};
use proptest::prelude::*;

use common::generated;

fn object(prob: &ProblemInstance, t: &Term, binding: &[usize]) -> usize {
    match t {
        Term::Var(v) => binding[*v],
        Term::Const(c) => prob.object_id(c).unwrap(),
    }
}

fn atom(prob: &ProblemInstance, a: &AtomSchema, binding: &[usize]) -> Atom {
    Atom {
        pred: a.pred,
        args: a.args.iter().map(|t| object(prob, t, binding)).collect(),
    }
}

/// Some operator effect can add `a`, judged by argument types alone.
fn addable(dom: &DomainModel, prob: &ProblemInstance, a: &Atom) -> bool {
    dom.operators.iter().any(|op| {
        op.effects
            .iter()
            .filter(|e| e.positive && e.atom.pred == a.pred)
            .any(|e| {
                let mut seen: Vec<Option<usize>> = vec![None; op.params.len()];
                e.atom.args.iter().zip(&a.args).all(|(t, &o)| match t {
                    Term::Const(c) => prob.objects[o].0 == *c,
                    Term::Var(v) => {
                        let typed = dom.types.is_subtype(prob.objects[o].1, op.params[*v].ty);
                        typed && *seen[*v].get_or_insert(o) == o
                    }
                })
            })
    })
}

/// Every type-correct binding of every operator, minus those with a
/// statically false or self-contradictory precondition.
fn naive_ground(dom: &DomainModel, prob: &ProblemInstance) -> Vec<String> {
    let is_static = |p: usize| {
        !dom.operators
            .iter()
            .any(|op| op.effects.iter().any(|e| e.atom.pred == p))
    };
    let mut out = Vec::new();
    for op in &dom.operators {
        let domains: Vec<Vec<usize>> = op
            .params
            .iter()
            .map(|p| {
                (0..prob.objects.len())
                    .filter(|&o| dom.types.is_subtype(prob.objects[o].1, p.ty))
                    .collect()
            })
            .collect();
        let mut binding = vec![0; op.params.len()];
        let total: usize = domains.iter().map(|d| d.len()).product();
        for mut k in 0..total {
            for (i, d) in domains.iter().enumerate() {
                binding[i] = d[k % d.len()];
                k /= d.len();
            }
            let mut pos = BTreeSet::new();
            let mut neg = BTreeSet::new();
            let ok = op.precond.iter().all(|c| match c {
                Condition::Equal {
                    left,
                    right,
                    positive,
                } => (object(prob, left, &binding) == object(prob, right, &binding)) == *positive,
                Condition::Literal(l) => {
                    let a = atom(prob, &l.atom, &binding);
                    let init = prob.init.contains(&a);
                    let fine = if l.positive {
                        init || (!is_static(a.pred) && addable(dom, prob, &a))
                    } else {
                        !(is_static(a.pred) && init)
                    };
                    if l.positive {
                        pos.insert(a)
                    } else {
                        neg.insert(a)
                    };
                    fine
                }
            });
            if ok && pos.is_disjoint(&neg) {
                let args: Vec<&str> = binding
                    .iter()
                    .map(|&o| prob.objects[o].0.as_str())
                    .collect();
                out.push(format!("({} {})", op.name, args.join(" ")).replace(" )", ")"));
            }
        }
    }
    out.sort();
    out
}

fn check(domain: &str, size: usize, seed: u64) -> Result<(), TestCaseError> {
    let p = generated(domain, size, seed);
    let mut names: Vec<String> = p.task.actions.iter().map(|a| a.name.clone()).collect();
    names.sort();
    let n = names.len();
    names.dedup();
    prop_assert_eq!(names.len(), n, "duplicate ground actions");
    prop_assert_eq!(names, naive_ground(&p.domain, &p.instance));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grounding_matches_naive_enumeration(
        domain in prop::sample::select(vec!["blocksworld", "logistics", "depots"]),
        size in 1usize..5,
        seed in 0u64..1000,
    ) {
        check(domain, size, seed)?;
    }
}

#[test]
fn blocksworld_action_count() {
    // pickup and putdown per block, stack and unstack per ordered pair.
    for n in 1..=6usize {
        let p = generated("blocksworld", n, 0);
        assert_eq!(p.task.num_actions(), 2 * n + 2 * n * (n - 1), "{n} blocks");
    }
}

/// The domain with type ids replaced by names, which printing may renumber.
fn by_name(d: &DomainModel) -> String {
    let ty = |t: usize| d.types.name(t).to_string();
    let mut types: Vec<(String, Option<String>)> = (0..d.types.len())
        .map(|t| (ty(t), d.types.parent(t).map(ty)))
        .collect();
    types.sort();
    let preds: Vec<(&str, Vec<String>)> = d
        .predicates
        .iter()
        .map(|p| (p.name.as_str(), p.params.iter().map(|&t| ty(t)).collect()))
        .collect();
    let ops: Vec<String> = d
        .operators
        .iter()
        .map(|o| {
            let params: Vec<String> = o.params.iter().map(|p| ty(p.ty)).collect();
            format!(
                "{} {:?} {:?} {:?} {}",
                o.name, params, o.precond, o.effects, o.cost
            )
        })
        .collect();
    format!(
        "{} {:?} {types:?} {:?} {preds:?} {ops:?}",
        d.name,
        d.requirements,
        d.constants.len()
    )
}

#[test]
fn printed_domains_parse_back() {
    let fixture =
        std::fs::read_to_string(format!("{}/blocksworld-domain.pddl", common::FIXTURES)).unwrap();
    for text in BUNDLES
        .iter()
        .map(|b| b.domain.to_string())
        .chain([fixture])
    {
        let dom = parse_domain(&text).unwrap();
        let again = parse_domain(&dom.to_string()).unwrap();
        assert_eq!(by_name(&dom), by_name(&again));
    }
}
