//! Fixed vocabularies for the natural-language tasks.

pub(crate) const PLAYER_NAMES: &[&str] = &[
    "Claire", "Bob", "Izzi", "Lola", "Ophelia", "Alice", "Dave", "Eve", "Fred", "Gertrude",
];

pub(crate) const POSITIONS: &[&str] = &[
    "striker",
    "left winger",
    "goalkeeper",
    "fullback",
    "right winger",
    "center midfielder",
    "cheerleader",
    "benchwarmer",
    "sweeper",
    "left midfielder",
];

pub(crate) const LIAR_NAMES: &[&str] = &[
    "Ka", "Jamey", "Delbert", "Millicent", "Fletcher", "Alejandro", "Amberly", "Andree", "Bernita",
    "Christie", "Crista", "Elanor", "Fidel", "Gwenn", "Helene", "Inga", "Jaymie", "Kristian", "Leda",
    "Lorine", "Maybelle", "Osvaldo", "Phoebe", "Rashida", "Sherrie", "Shalonda", "Tamika", "Ryan",
    "Vina", "Willian",
];

pub(crate) const FRUITS: &[&str] = &[
    "loquats",
    "peaches",
    "blackberries",
    "oranges",
    "apples",
    "guavas",
    "cherries",
    "raspberries",
    "kiwis",
    "mangoes",
    "plums",
    "watermelons",
];

const CARDINALS: &[&str] = &["zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine"];

const ORDINALS: &[&str] = &[
    "zeroth", "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth",
];

pub(crate) fn cardinal(n: u32) -> &'static str {
    CARDINALS[n as usize]
}

pub(crate) fn ordinal(n: u32) -> &'static str {
    ORDINALS[n as usize]
}

/// "A", "A and B", "A, B, and C".
pub(crate) fn join_list(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [a] => a.clone(),
        [a, b] => format!("{a} and {b}"),
        [init @ .., last] => format!("{}, and {last}", init.join(", ")),
    }
}
