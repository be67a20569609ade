use std::fmt;

use serde::{Deserialize, Serialize};

/// One of the two strategic players.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Eve,
    Adam,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eve => Player::Adam,
            Player::Adam => Player::Eve,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Eve => "eve",
            Player::Adam => "adam",
        })
    }
}

/// Who moves the token out of a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Owner {
    Eve,
    Adam,
    Random,
}

impl Owner {
    pub fn player(self) -> Option<Player> {
        match self {
            Owner::Eve => Some(Player::Eve),
            Owner::Adam => Some(Player::Adam),
            Owner::Random => None,
        }
    }

    pub fn is(self, player: Player) -> bool {
        self.player() == Some(player)
    }
}

impl From<Player> for Owner {
    fn from(p: Player) -> Owner {
        match p {
            Player::Eve => Owner::Eve,
            Player::Adam => Owner::Adam,
        }
    }
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Owner::Eve => "eve",
            Owner::Adam => "adam",
            Owner::Random => "random",
        })
    }
}
