//! A grounded HGN planning problem: task, methods, initial state and network.

use std::path::Path;
use std::sync::Arc;

use crate::goals::network::NetworkError;
use crate::goals::{parse_methods, GoalFormula, GoalNetwork, Literal, MethodLibrary};
use crate::model::{
    ground, parse_domain, parse_problem, DomainModel, GroundTask, ProblemInstance, State,
};
use crate::sexpr::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{file}: {source}")]
    Parse {
        file: String,
        #[source]
        source: ParseError,
    },
    #[error("{file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: {source}")]
    Network {
        file: String,
        #[source]
        source: NetworkError,
    },
}

#[derive(Clone, Debug)]
pub struct HgnProblem {
    pub domain: Arc<DomainModel>,
    pub instance: Arc<ProblemInstance>,
    pub task: Arc<GroundTask>,
    pub methods: Arc<MethodLibrary>,
    pub initial: State,
    pub network: GoalNetwork,
    /// Classical goal: the `:goal` section, or the conjunction of the
    /// single-disjunct network goals.
    pub goal: GoalFormula,
}

/// Names used in error messages for the three inputs.
#[derive(Clone, Copy, Debug)]
pub struct SourceNames<'a> {
    pub domain: &'a str,
    pub problem: &'a str,
    pub methods: &'a str,
}

impl Default for SourceNames<'_> {
    fn default() -> Self {
        SourceNames {
            domain: "domain",
            problem: "problem",
            methods: "methods",
        }
    }
}

impl HgnProblem {
    pub fn from_texts(
        domain: &str,
        problem: &str,
        methods: Option<&str>,
    ) -> Result<HgnProblem, LoadError> {
        HgnProblem::from_named_texts(domain, problem, methods, SourceNames::default())
    }

    pub fn from_named_texts(
        domain: &str,
        problem: &str,
        methods: Option<&str>,
        names: SourceNames<'_>,
    ) -> Result<HgnProblem, LoadError> {
        let parse_err = |file: &str| {
            let file = file.to_string();
            move |source| LoadError::Parse { file, source }
        };
        let dom = parse_domain(domain).map_err(parse_err(names.domain))?;
        let inst = parse_problem(problem, &dom).map_err(parse_err(names.problem))?;
        let lib = match methods {
            Some(text) => parse_methods(text, &dom).map_err(parse_err(names.methods))?,
            None => MethodLibrary::default(),
        };
        let task = ground(&dom, &inst);
        let network = GoalNetwork::from_spec(&inst.network_spec(), &task).map_err(|source| {
            LoadError::Network {
                file: names.problem.to_string(),
                source,
            }
        })?;
        let goal_lits: Vec<Literal> = inst
            .classical_goal()
            .iter()
            .map(|l| Literal {
                fact: task.fact_id(&l.atom).expect("goal atoms are interned"),
                positive: l.positive,
            })
            .collect();
        let goal = GoalFormula::conjunction(goal_lits).map_err(|e| LoadError::Network {
            file: names.problem.to_string(),
            source: NetworkError::BadGoal {
                node: "goal".into(),
                source: e,
            },
        })?;
        Ok(HgnProblem {
            domain: Arc::new(dom),
            instance: Arc::new(inst),
            initial: task.initial.clone(),
            task: Arc::new(task),
            methods: Arc::new(lib),
            network,
            goal,
        })
    }

    pub fn from_files(
        domain: &Path,
        problem: &Path,
        methods: Option<&Path>,
    ) -> Result<HgnProblem, LoadError> {
        let read = |p: &Path| {
            std::fs::read_to_string(p).map_err(|source| LoadError::Io {
                file: p.display().to_string(),
                source,
            })
        };
        let d = read(domain)?;
        let p = read(problem)?;
        let m = methods.map(read).transpose()?;
        let (dn, pn) = (domain.display().to_string(), problem.display().to_string());
        let mn = methods.map(|m| m.display().to_string()).unwrap_or_default();
        HgnProblem::from_named_texts(
            &d,
            &p,
            m.as_deref(),
            SourceNames {
                domain: &dn,
                problem: &pn,
                methods: &mn,
            },
        )
    }
}
