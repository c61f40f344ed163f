//! Everything computed for one group, in dependency order.

use crate::action::{build_actions, ActionTable};
use crate::character_table::{character_table, CharacterTable};
use crate::error::Error;
use crate::fields::{character_field, class_field, invariant_profile, InvariantProfile};
use crate::group::{ClassData, PermGroup};
use crate::zmod::FieldKey;

#[derive(Clone, Debug)]
pub struct GroupAnalysis {
    group: PermGroup,
    classes: ClassData,
    table: CharacterTable,
    class_fields: Vec<FieldKey>,
    character_fields: Vec<FieldKey>,
    actions: ActionTable,
    profile: InvariantProfile,
}

impl GroupAnalysis {
    pub fn new(group: PermGroup) -> Result<Self, Error> {
        let classes = ClassData::compute(&group);
        let table = character_table(&group, &classes)?;
        let class_fields: Vec<FieldKey> = (0..classes.len()).map(|k| class_field(&classes, k)).collect();
        let character_fields: Vec<FieldKey> = (0..table.len())
            .map(|i| character_field(&table, &classes, i))
            .collect();
        let actions = build_actions(&table, &classes)?;
        let profile = invariant_profile(&classes, &table, &class_fields, &character_fields);
        Ok(GroupAnalysis {
            group,
            classes,
            table,
            class_fields,
            character_fields,
            actions,
            profile,
        })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn classes(&self) -> &ClassData {
        &self.classes
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn class_fields(&self) -> &[FieldKey] {
        &self.class_fields
    }

    pub fn character_fields(&self) -> &[FieldKey] {
        &self.character_fields
    }

    pub fn actions(&self) -> &ActionTable {
        &self.actions
    }

    pub fn profile(&self) -> &InvariantProfile {
        &self.profile
    }
}
