//! Default household vocabulary: 4 rooms, 45 locations, 182 objects,
//! 34 actions and 16 states, together with the coarse semantic groups the
//! synthetic generator uses to decide which facts are plausible.

use super::{Catalog, EntityId, EntityKind};

pub const ROOMS: [&str; 4] = ["kitchen", "bedroom", "bathroom", "livingroom"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Zone {
    KitchenStore,
    KitchenSurface,
    BathFixture,
    BathStore,
    BedSurface,
    BedStore,
    LivingSurface,
    LivingStore,
    Utility,
}

impl Zone {
    pub const ALL: [Zone; 9] = [
        Zone::KitchenStore,
        Zone::KitchenSurface,
        Zone::BathFixture,
        Zone::BathStore,
        Zone::BedSurface,
        Zone::BedStore,
        Zone::LivingSurface,
        Zone::LivingStore,
        Zone::Utility,
    ];

    /// Room plausibility for locations of this zone.
    pub fn rooms(self) -> &'static [(&'static str, u8)] {
        match self {
            Zone::KitchenStore => &[("kitchen", 3)],
            Zone::KitchenSurface => &[("kitchen", 3), ("livingroom", 1)],
            Zone::BathFixture => &[("bathroom", 3)],
            Zone::BathStore => &[("bathroom", 3), ("bedroom", 1)],
            Zone::BedSurface => &[("bedroom", 3), ("livingroom", 1)],
            Zone::BedStore => &[("bedroom", 3), ("livingroom", 1)],
            Zone::LivingSurface => &[("livingroom", 3), ("bedroom", 1)],
            Zone::LivingStore => &[("livingroom", 3)],
            Zone::Utility => &[
                ("kitchen", 2),
                ("bathroom", 2),
                ("bedroom", 1),
                ("livingroom", 1),
            ],
        }
    }
}

pub struct LocationSpec {
    pub name: &'static str,
    pub zone: Zone,
    /// Objects can be *in* it (`ObjInLoc`).
    pub contains: bool,
    /// Objects can be *on* it (`ObjOnLoc`).
    pub supports: bool,
}

const fn loc(name: &'static str, zone: Zone, contains: bool, supports: bool) -> LocationSpec {
    LocationSpec {
        name,
        zone,
        contains,
        supports,
    }
}

pub const LOCATIONS: [LocationSpec; 45] = [
    loc("fridge", Zone::KitchenStore, true, false),
    loc("cabinet", Zone::KitchenStore, true, true),
    loc("drawer", Zone::KitchenStore, true, false),
    loc("kitchen_cabinet", Zone::KitchenStore, true, false),
    loc("pantry", Zone::KitchenStore, true, false),
    loc("cupboard", Zone::KitchenStore, true, true),
    loc("dishwasher", Zone::KitchenStore, true, false),
    loc("oven", Zone::KitchenStore, true, false),
    loc("microwave", Zone::KitchenStore, true, true),
    loc("counter", Zone::KitchenSurface, false, true),
    loc("stove", Zone::KitchenSurface, false, true),
    loc("kitchen_table", Zone::KitchenSurface, false, true),
    loc("table", Zone::KitchenSurface, false, true),
    loc("dish_rack", Zone::KitchenSurface, true, true),
    loc("sink", Zone::KitchenSurface, true, true),
    loc("bathtub", Zone::BathFixture, true, true),
    loc("shower", Zone::BathFixture, true, false),
    loc("toilet", Zone::BathFixture, false, true),
    loc("bathroom_counter", Zone::BathFixture, false, true),
    loc("towel_rack", Zone::BathFixture, false, true),
    loc("vanity", Zone::BathFixture, true, true),
    loc("bathroom_cabinet", Zone::BathStore, true, true),
    loc("bed", Zone::BedSurface, false, true),
    loc("nightstand", Zone::BedSurface, true, true),
    loc("desk", Zone::BedSurface, true, true),
    loc("wall_shelf", Zone::BedSurface, false, true),
    loc("closet", Zone::BedStore, true, false),
    loc("dresser", Zone::BedStore, true, true),
    loc("sofa", Zone::LivingSurface, false, true),
    loc("coffee_table", Zone::LivingSurface, false, true),
    loc("tv_stand", Zone::LivingSurface, false, true),
    loc("bookshelf", Zone::LivingSurface, true, true),
    loc("armchair", Zone::LivingSurface, false, true),
    loc("side_table", Zone::LivingSurface, false, true),
    loc("windowsill", Zone::LivingSurface, false, true),
    loc("shelf", Zone::LivingSurface, false, true),
    loc("media_cabinet", Zone::LivingStore, true, true),
    loc("washing_machine", Zone::Utility, true, true),
    loc("utility_closet", Zone::Utility, true, false),
    loc("laundry_basket", Zone::Utility, true, false),
    loc("garbage", Zone::Utility, true, false),
    loc("recycling_bin", Zone::Utility, true, false),
    loc("hook", Zone::Utility, false, true),
    loc("floor", Zone::Utility, false, true),
    loc("bench", Zone::Utility, false, true),
];

/// Room plausibility overrides for locations found in more places than
/// their zone suggests.
pub fn location_room_override(name: &str) -> &'static [(&'static str, u8)] {
    match name {
        "floor" => &[
            ("kitchen", 3),
            ("bedroom", 3),
            ("bathroom", 3),
            ("livingroom", 3),
        ],
        "shelf" | "cabinet" => &[
            ("kitchen", 2),
            ("bedroom", 2),
            ("bathroom", 2),
            ("livingroom", 3),
        ],
        "table" => &[("kitchen", 3), ("livingroom", 3)],
        "hook" => &[("bathroom", 3), ("bedroom", 2)],
        "sink" => &[("kitchen", 3), ("bathroom", 3)],
        "garbage" => &[("kitchen", 3), ("bathroom", 2), ("bedroom", 1)],
        _ => &[],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjectGroup {
    Cloth,
    Sponge,
    FloorTool,
    Duster,
    Chemical,
    BathTool,
    Dish,
    Food,
    Electronic,
    HardDecor,
    SoftFurnish,
    Toiletry,
    Clothing,
    Office,
    Appliance,
}

impl ObjectGroup {
    pub const ALL: [ObjectGroup; 15] = [
        ObjectGroup::Cloth,
        ObjectGroup::Sponge,
        ObjectGroup::FloorTool,
        ObjectGroup::Duster,
        ObjectGroup::Chemical,
        ObjectGroup::BathTool,
        ObjectGroup::Dish,
        ObjectGroup::Food,
        ObjectGroup::Electronic,
        ObjectGroup::HardDecor,
        ObjectGroup::SoftFurnish,
        ObjectGroup::Toiletry,
        ObjectGroup::Clothing,
        ObjectGroup::Office,
        ObjectGroup::Appliance,
    ];

    pub fn is_cleaning_tool(self) -> bool {
        matches!(
            self,
            ObjectGroup::Cloth
                | ObjectGroup::Sponge
                | ObjectGroup::FloorTool
                | ObjectGroup::Duster
                | ObjectGroup::Chemical
                | ObjectGroup::BathTool
        )
    }

    pub fn members(self) -> &'static [&'static str] {
        match self {
            ObjectGroup::Cloth => &[
                "rag",
                "towel",
                "towel_rolled",
                "microfiber_cloth",
                "dishcloth",
                "paper_towel",
                "cleaning_wipes",
            ],
            ObjectGroup::Sponge => &[
                "sponge",
                "washing_sponge",
                "scrubber",
                "scrub_brush",
                "bottle_brush",
            ],
            ObjectGroup::FloorTool => &["broom", "dustpan", "mop", "vacuum", "steam_cleaner"],
            ObjectGroup::Duster => &["duster", "feather_duster", "lint_roller", "dust_mitt"],
            ObjectGroup::Chemical => &[
                "bleach",
                "disinfectant_spray",
                "glass_cleaner",
                "dish_soap",
                "detergent",
            ],
            ObjectGroup::BathTool => &["toilet_brush", "squeegee"],
            ObjectGroup::Dish => &[
                "plate",
                "bowl",
                "cup",
                "mug",
                "glass",
                "pot",
                "pan",
                "fork",
                "spoon",
                "knife",
                "cutting_board",
                "baking_tray",
                "kettle",
                "teapot",
            ],
            ObjectGroup::Food => &[
                "tomato", "apple", "banana", "bread", "cheese", "milk", "egg", "carrot", "potato",
                "onion", "chicken", "fish", "rice", "pasta", "cereal", "juice", "butter", "cake",
                "cookie", "lettuce", "orange", "soup",
            ],
            ObjectGroup::Electronic => &[
                "laptop", "tv", "keyboard", "monitor", "phone", "remote", "speaker", "lamp",
                "radio", "tablet", "printer", "fan", "clock", "charger",
            ],
            ObjectGroup::HardDecor => &[
                "chair",
                "stool",
                "mirror",
                "window",
                "picture_frame",
                "vase",
                "plant",
            ],
            ObjectGroup::SoftFurnish => &["rug", "carpet", "curtain", "cushion", "blanket", "bath_mat"],
            ObjectGroup::Toiletry => &[
                "toothbrush",
                "toothpaste",
                "shampoo",
                "bar_soap",
                "conditioner",
                "razor",
                "comb",
                "hairdryer",
                "lotion",
                "toilet_paper",
                "shower_curtain",
                "bathroom_scale",
            ],
            ObjectGroup::Clothing => &[
                "shirt", "pants", "dress", "jacket", "sock", "shoe", "hat", "scarf", "sweater",
                "skirt", "belt", "pajamas", "coat", "glove",
            ],
            ObjectGroup::Office => &[
                "book", "pen", "pencil", "notebook", "paper", "folder", "stapler", "scissors",
                "tape", "envelope", "magazine", "pillow", "bedsheet", "toy", "backpack", "candle",
            ],
            ObjectGroup::Appliance => &[
                "toaster",
                "blender",
                "coffee_maker",
                "mixer",
                "rice_cooker",
                "juicer",
                "food_processor",
                "waffle_iron",
                "grater",
                "colander",
                "ladle",
                "spatula",
            ],
        }
    }

    /// Where members of the group are usually kept.
    pub fn home_zones(self) -> &'static [(Zone, u8)] {
        use Zone::*;
        match self {
            ObjectGroup::Cloth => &[(KitchenSurface, 3), (KitchenStore, 2), (BathFixture, 2), (Utility, 2)],
            ObjectGroup::Sponge => &[(KitchenSurface, 3), (BathFixture, 2), (KitchenStore, 1)],
            ObjectGroup::FloorTool => &[(Utility, 3), (BedStore, 1)],
            ObjectGroup::Duster => &[(Utility, 3), (BedStore, 2), (LivingSurface, 1)],
            ObjectGroup::Chemical => &[(BathStore, 3), (Utility, 3), (KitchenStore, 2), (KitchenSurface, 1)],
            ObjectGroup::BathTool => &[(BathFixture, 3), (BathStore, 2), (Utility, 1)],
            ObjectGroup::Dish => &[(KitchenStore, 3), (KitchenSurface, 3)],
            ObjectGroup::Food => &[(KitchenStore, 3), (KitchenSurface, 2)],
            ObjectGroup::Electronic => &[(LivingSurface, 3), (BedSurface, 3), (LivingStore, 1)],
            ObjectGroup::HardDecor => &[(LivingSurface, 2), (BedSurface, 1), (Utility, 1)],
            ObjectGroup::SoftFurnish => &[(Utility, 2), (LivingSurface, 2), (BedSurface, 2), (BathFixture, 1)],
            ObjectGroup::Toiletry => &[(BathFixture, 3), (BathStore, 3)],
            ObjectGroup::Clothing => &[(BedStore, 3), (Utility, 2), (BedSurface, 1)],
            ObjectGroup::Office => &[(BedSurface, 3), (LivingSurface, 2), (BedStore, 1)],
            ObjectGroup::Appliance => &[(KitchenSurface, 3), (KitchenStore, 2)],
        }
    }

    /// Actions members of the group are tools for.
    pub fn used_to(self) -> &'static [(&'static str, u8)] {
        match self {
            ObjectGroup::Cloth => &[("wipe", 3), ("dust", 2), ("dry_off", 2), ("disinfect", 1)],
            ObjectGroup::Sponge => &[("wash", 3), ("scrub", 3), ("rinse", 2), ("wipe", 1)],
            ObjectGroup::FloorTool => &[("sweep", 3), ("wash", 1), ("scrub", 1)],
            ObjectGroup::Duster => &[("dust", 3), ("wipe", 1), ("sweep", 1)],
            ObjectGroup::Chemical => &[("disinfect", 3), ("wash", 2), ("spray", 2), ("rinse", 1)],
            ObjectGroup::BathTool => &[("scrub", 3), ("rinse", 2), ("wipe", 1)],
            ObjectGroup::Dish => &[("fill", 2), ("pour", 2), ("cook", 1), ("fry", 1), ("bake", 1), ("heat", 1)],
            ObjectGroup::Appliance => &[("cook", 2), ("heat", 2), ("warm_up", 2), ("drain", 2), ("bake", 1), ("fry", 1), ("pour", 1)],
            ObjectGroup::Electronic => &[("turn_on", 1), ("turn_off", 1)],
            ObjectGroup::Toiletry => &[("dry_off", 1)],
            _ => &[],
        }
    }

    /// Actions that can be applied to members of the group.
    pub fn can_be(self) -> &'static [(&'static str, u8)] {
        match self {
            ObjectGroup::Dish => &[
                ("wash", 3), ("rinse", 3), ("wipe", 2), ("scrub", 2), ("dry_off", 2), ("fill", 2),
                ("empty_out", 1), ("drop", 1), ("smash", 1), ("disinfect", 1),
            ],
            ObjectGroup::Food => &[
                ("cook", 3), ("bake", 2), ("fry", 2), ("heat", 2), ("warm_up", 2), ("chill", 2),
                ("freeze", 2), ("defrost", 2), ("throw", 1), ("drop", 1), ("rinse", 1), ("wash", 1),
            ],
            ObjectGroup::Electronic => &[
                ("turn_on", 3), ("turn_off", 3), ("plug_in", 3), ("unplug", 3), ("dust", 3),
                ("wipe", 2), ("drop", 1), ("disinfect", 1),
            ],
            ObjectGroup::HardDecor => &[
                ("wipe", 3), ("dust", 3), ("disinfect", 2), ("scrub", 1), ("water", 2),
                ("open", 2), ("close", 2), ("drop", 1),
            ],
            ObjectGroup::SoftFurnish => &[
                ("wash", 3), ("sweep", 2), ("dust", 2), ("hang", 2), ("dry_off", 2), ("soak", 1),
                ("scrub", 1),
            ],
            ObjectGroup::Toiletry => &[
                ("rinse", 2), ("wipe", 1), ("open", 1), ("close", 1), ("plug_in", 1), ("drop", 1),
                ("scrub", 1), ("wash", 1), ("disinfect", 1),
            ],
            ObjectGroup::Clothing => &[
                ("wash", 3), ("hang", 3), ("dry_off", 2), ("soak", 2), ("rinse", 1), ("throw", 1),
            ],
            ObjectGroup::Office => &[("open", 2), ("close", 2), ("drop", 2), ("throw", 1), ("dust", 1)],
            ObjectGroup::Appliance => &[
                ("turn_on", 3), ("turn_off", 3), ("plug_in", 2), ("unplug", 2), ("wash", 2),
                ("wipe", 2), ("rinse", 1), ("fill", 1), ("empty_out", 1), ("disinfect", 1),
            ],
            ObjectGroup::Cloth | ObjectGroup::Sponge => &[
                ("rinse", 2), ("soak", 2), ("wash", 1), ("dry_off", 1), ("throw", 1),
            ],
            ObjectGroup::FloorTool | ObjectGroup::Duster | ObjectGroup::BathTool => &[
                ("rinse", 1), ("empty_out", 2), ("plug_in", 1), ("hang", 1),
            ],
            ObjectGroup::Chemical => &[("spray", 2), ("pour", 2), ("empty_out", 1), ("refill", 2)],
        }
    }

    /// Things members of the group operate on: other object groups or zones.
    pub fn operates_on(self) -> &'static [(Target, u8)] {
        use ObjectGroup as G;
        use Target::{Group, In};
        use Zone::*;
        match self {
            G::Cloth => &[
                (Group(G::HardDecor), 3), (Group(G::Electronic), 3), (Group(G::Dish), 3),
                (In(KitchenSurface), 3), (In(LivingSurface), 2), (In(BedSurface), 2),
                (Group(G::Appliance), 2), (Group(G::Toiletry), 1), (In(BathFixture), 1),
            ],
            G::Sponge => &[
                (Group(G::Dish), 3), (In(BathFixture), 3), (In(KitchenSurface), 2),
                (Group(G::Appliance), 2), (Group(G::Toiletry), 1), (Group(G::HardDecor), 1),
                (Group(G::SoftFurnish), 1),
            ],
            G::FloorTool => &[
                (Group(G::SoftFurnish), 3), (In(Utility), 3), (Group(G::HardDecor), 1),
            ],
            G::Duster => &[
                (Group(G::Electronic), 3), (Group(G::HardDecor), 3), (In(LivingSurface), 3),
                (In(BedSurface), 2), (Group(G::SoftFurnish), 2), (Group(G::Office), 1),
            ],
            G::Chemical => &[
                (In(BathFixture), 3), (Group(G::Dish), 2), (Group(G::HardDecor), 2),
                (In(KitchenSurface), 2), (Group(G::Clothing), 2), (Group(G::Toiletry), 2),
                (Group(G::SoftFurnish), 1), (Group(G::Appliance), 1),
            ],
            G::BathTool => &[
                (In(BathFixture), 3), (Group(G::Toiletry), 2), (Group(G::HardDecor), 2),
            ],
            G::Dish => &[(Group(G::Food), 3), (Group(G::Dish), 1)],
            G::Appliance => &[(Group(G::Food), 3), (Group(G::Dish), 1)],
            G::Electronic => &[(Group(G::Electronic), 1)],
            G::Office => &[(Group(G::Office), 1)],
            _ => &[],
        }
    }

    pub fn has_state(self) -> &'static [(&'static str, u8)] {
        match self {
            ObjectGroup::Dish => &[("dirty", 3), ("clean", 3), ("wet", 2), ("dry", 2), ("full", 1), ("empty", 1), ("broken", 1), ("hot", 1)],
            ObjectGroup::Food => &[("cooked", 3), ("hot", 2), ("cold", 2), ("wet", 1), ("broken", 1)],
            ObjectGroup::Electronic => &[("on", 3), ("off", 3), ("plugged_in", 2), ("unplugged", 2), ("dirty", 2), ("clean", 2), ("broken", 1)],
            ObjectGroup::HardDecor => &[("dirty", 3), ("clean", 3), ("opened", 1), ("closed", 1), ("broken", 1)],
            ObjectGroup::SoftFurnish => &[("dirty", 3), ("clean", 3), ("wet", 2), ("dry", 2)],
            ObjectGroup::Toiletry => &[("full", 2), ("empty", 2), ("wet", 1), ("dirty", 1), ("clean", 1), ("on", 1), ("off", 1)],
            ObjectGroup::Clothing => &[("dirty", 3), ("clean", 3), ("wet", 2), ("dry", 2)],
            ObjectGroup::Office => &[("opened", 2), ("closed", 2), ("broken", 1)],
            ObjectGroup::Appliance => &[("on", 3), ("off", 3), ("plugged_in", 2), ("unplugged", 2), ("dirty", 2), ("clean", 2), ("hot", 1)],
            _ => &[("wet", 2), ("dry", 2), ("dirty", 2), ("clean", 2), ("full", 1), ("empty", 1)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Group(ObjectGroup),
    In(Zone),
}

/// Groups assigned round-robin to the procedurally named filler objects.
const FILLER_GROUPS: [ObjectGroup; 8] = [
    ObjectGroup::Food,
    ObjectGroup::Office,
    ObjectGroup::Clothing,
    ObjectGroup::Dish,
    ObjectGroup::Electronic,
    ObjectGroup::HardDecor,
    ObjectGroup::Toiletry,
    ObjectGroup::Appliance,
];

pub const OBJECT_COUNT: usize = 182;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionGroup {
    Cleaning,
    Device,
    Cooking,
    Temperature,
    Liquid,
    Wetness,
    Breakage,
}

/// `(action, group, canonical effect)`.
pub const ACTIONS: [(&str, ActionGroup, &str); 34] = [
    ("wipe", ActionGroup::Cleaning, "clean"),
    ("dust", ActionGroup::Cleaning, "clean"),
    ("sweep", ActionGroup::Cleaning, "clean"),
    ("wash", ActionGroup::Cleaning, "clean"),
    ("rinse", ActionGroup::Cleaning, "clean"),
    ("disinfect", ActionGroup::Cleaning, "clean"),
    ("scrub", ActionGroup::Cleaning, "clean"),
    ("open", ActionGroup::Device, "opened"),
    ("close", ActionGroup::Device, "closed"),
    ("turn_on", ActionGroup::Device, "on"),
    ("turn_off", ActionGroup::Device, "off"),
    ("plug_in", ActionGroup::Device, "plugged_in"),
    ("unplug", ActionGroup::Device, "unplugged"),
    ("bake", ActionGroup::Cooking, "cooked"),
    ("cook", ActionGroup::Cooking, "cooked"),
    ("fry", ActionGroup::Cooking, "cooked"),
    ("heat", ActionGroup::Temperature, "hot"),
    ("warm_up", ActionGroup::Temperature, "hot"),
    ("chill", ActionGroup::Temperature, "cold"),
    ("freeze", ActionGroup::Temperature, "cold"),
    ("defrost", ActionGroup::Temperature, "wet"),
    ("fill", ActionGroup::Liquid, "full"),
    ("refill", ActionGroup::Liquid, "full"),
    ("empty_out", ActionGroup::Liquid, "empty"),
    ("pour", ActionGroup::Liquid, "empty"),
    ("drain", ActionGroup::Liquid, "empty"),
    ("water", ActionGroup::Wetness, "wet"),
    ("soak", ActionGroup::Wetness, "wet"),
    ("spray", ActionGroup::Wetness, "wet"),
    ("dry_off", ActionGroup::Wetness, "dry"),
    ("hang", ActionGroup::Wetness, "dry"),
    ("drop", ActionGroup::Breakage, "broken"),
    ("smash", ActionGroup::Breakage, "broken"),
    ("throw", ActionGroup::Breakage, "broken"),
];

pub const STATES: [&str; 16] = [
    "dirty",
    "clean",
    "on",
    "off",
    "cooked",
    "broken",
    "opened",
    "closed",
    "plugged_in",
    "unplugged",
    "hot",
    "cold",
    "full",
    "empty",
    "wet",
    "dry",
];

pub const INVERSE_STATES: [(&str, &str); 7] = [
    ("dirty", "clean"),
    ("on", "off"),
    ("opened", "closed"),
    ("plugged_in", "unplugged"),
    ("hot", "cold"),
    ("full", "empty"),
    ("wet", "dry"),
];

pub const INVERSE_ACTIONS: [(&str, &str); 6] = [
    ("open", "close"),
    ("turn_on", "turn_off"),
    ("plug_in", "unplug"),
    ("fill", "empty_out"),
    ("heat", "chill"),
    ("soak", "dry_off"),
];

/// Semantic grouping of every entity, used by the generator and by the
/// synthetic word vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemanticGroup {
    Room,
    Zone(Zone),
    Object(ObjectGroup),
    Action(ActionGroup),
    State,
}

/// `(name, group)` of all 182 objects in catalog order.
pub fn object_names() -> Vec<(String, ObjectGroup)> {
    let mut out: Vec<(String, ObjectGroup)> = ObjectGroup::ALL
        .iter()
        .flat_map(|g| g.members().iter().map(move |m| (m.to_string(), *g)))
        .collect();
    let named = out.len();
    for i in 0..OBJECT_COUNT - named {
        out.push((
            format!("object_{:02}", i + 1),
            FILLER_GROUPS[i % FILLER_GROUPS.len()],
        ));
    }
    out
}

/// The default 281-entity catalog: rooms, locations, objects, actions, states.
pub fn default_catalog() -> Catalog {
    let mut c = Catalog::new();
    for r in ROOMS {
        c.add(r, EntityKind::Room).expect("unique room names");
    }
    for l in &LOCATIONS {
        c.add(l.name, EntityKind::Location).expect("unique location names");
    }
    for (name, _) in object_names() {
        c.add(&name, EntityKind::Object).expect("unique object names");
    }
    for (a, _, _) in ACTIONS {
        c.add(a, EntityKind::Action).expect("unique action names");
    }
    for s in STATES {
        c.add(s, EntityKind::State).expect("unique state names");
    }
    c
}

/// Semantic group of each entity in `catalog`; names outside the default
/// vocabulary fall back to a per-kind group.
pub fn semantic_groups(catalog: &Catalog) -> Vec<SemanticGroup> {
    let objects = object_names();
    catalog
        .entities()
        .iter()
        .map(|e| match e.kind {
            EntityKind::Room => SemanticGroup::Room,
            EntityKind::State => SemanticGroup::State,
            EntityKind::Location => SemanticGroup::Zone(
                LOCATIONS
                    .iter()
                    .find(|l| l.name == e.name)
                    .map(|l| l.zone)
                    .unwrap_or(Zone::Utility),
            ),
            EntityKind::Object => SemanticGroup::Object(
                objects
                    .iter()
                    .find(|(n, _)| *n == e.name)
                    .map(|(_, g)| *g)
                    .unwrap_or(ObjectGroup::Office),
            ),
            EntityKind::Action => SemanticGroup::Action(
                ACTIONS
                    .iter()
                    .find(|(n, _, _)| *n == e.name)
                    .map(|(_, g, _)| *g)
                    .unwrap_or(ActionGroup::Device),
            ),
        })
        .collect()
}

/// Name of the effect every cleaning action achieves.
pub const CLEAN: &str = "clean";

pub fn is_cleaning_action(catalog: &Catalog, id: EntityId) -> bool {
    ACTIONS
        .iter()
        .any(|(n, g, _)| *g == ActionGroup::Cleaning && catalog.name(id) == *n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_catalog_matches_kind_counts() {
        let c = default_catalog();
        assert_eq!(c.len(), 281);
        assert_eq!(c.count_kind(EntityKind::Room), 4);
        assert_eq!(c.count_kind(EntityKind::Location), 45);
        assert_eq!(c.count_kind(EntityKind::Object), 182);
        assert_eq!(c.count_kind(EntityKind::Action), 34);
        assert_eq!(c.count_kind(EntityKind::State), 16);
    }

    #[test]
    fn vocabulary_references_resolve() {
        let c = default_catalog();
        for (a, _, e) in ACTIONS {
            assert_eq!(c.kind(c.require(a).unwrap()), EntityKind::Action);
            assert_eq!(c.kind(c.require(e).unwrap()), EntityKind::State);
        }
        for g in ObjectGroup::ALL {
            for (a, _) in g.used_to().iter().chain(g.can_be()) {
                assert_eq!(c.kind(c.require(a).unwrap()), EntityKind::Action, "{a}");
            }
            for (s, _) in g.has_state() {
                assert_eq!(c.kind(c.require(s).unwrap()), EntityKind::State, "{s}");
            }
        }
        for (a, b) in INVERSE_ACTIONS {
            assert!(c.lookup(a).is_some() && c.lookup(b).is_some());
        }
        for (a, b) in INVERSE_STATES {
            assert!(c.lookup(a).is_some() && c.lookup(b).is_some());
        }
        for l in &LOCATIONS {
            for (room, _) in l.zone.rooms().iter().chain(location_room_override(l.name)) {
                assert_eq!(c.kind(c.require(room).unwrap()), EntityKind::Room);
            }
        }
    }
}
