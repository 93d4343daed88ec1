//! Domain and method files shipped with the crate.

#[derive(Clone, Copy, Debug)]
pub struct DomainBundle {
    pub name: &'static str,
    pub domain: &'static str,
    pub methods: &'static str,
}

pub const BUNDLES: [DomainBundle; 4] = [
    DomainBundle {
        name: "blocksworld",
        domain: include_str!("../../domains/blocksworld/domain.pddl"),
        methods: include_str!("../../domains/blocksworld/methods.pddl"),
    },
    DomainBundle {
        name: "logistics",
        domain: include_str!("../../domains/logistics/domain.pddl"),
        methods: include_str!("../../domains/logistics/methods.pddl"),
    },
    DomainBundle {
        name: "depots",
        domain: include_str!("../../domains/depots/domain.pddl"),
        methods: include_str!("../../domains/depots/methods.pddl"),
    },
    DomainBundle {
        name: "manufacturing",
        domain: include_str!("../../domains/manufacturing/domain.pddl"),
        methods: include_str!("../../domains/manufacturing/methods.pddl"),
    },
];

pub fn bundle(name: &str) -> Option<&'static DomainBundle> {
    BUNDLES.iter().find(|b| b.name == name)
}
