// Built-in screening instrument definition. Mirrors the service's shipped
// dt.json fixture; replace alongside it when a deployment customizes items.
import type { Instrument } from './types.js';

export const DT_INSTRUMENT: Instrument = {
  "id": "distress-thermometer",
  "version": 1,
  "title": "Distress Thermometer and Problem List",
  "sections": [
    {
      "id": "thermometer",
      "title": "Distress Thermometer",
      "items": [
        {
          "id": "distress_level",
          "kind": "scale",
          "min": 0,
          "max": 10,
          "label": "How distressed have you been during the past week, including today? (0 = no distress, 10 = extreme distress)",
          "required": true
        }
      ]
    },
    {
      "id": "practical",
      "title": "Practical Problems",
      "items": [
        {
          "id": "child_care",
          "kind": "boolean",
          "label": "Child care",
          "required": false
        },
        {
          "id": "housing",
          "kind": "boolean",
          "label": "Housing",
          "required": false
        },
        {
          "id": "insurance_financial",
          "kind": "boolean",
          "label": "Insurance / financial",
          "required": false
        },
        {
          "id": "transportation",
          "kind": "boolean",
          "label": "Transportation",
          "required": false
        },
        {
          "id": "work_school",
          "kind": "boolean",
          "label": "Work / school",
          "required": false
        },
        {
          "id": "treatment_decisions",
          "kind": "boolean",
          "label": "Treatment decisions",
          "required": false
        }
      ]
    },
    {
      "id": "family",
      "title": "Family Problems",
      "items": [
        {
          "id": "dealing_with_children",
          "kind": "boolean",
          "label": "Dealing with children",
          "required": false
        },
        {
          "id": "dealing_with_partner",
          "kind": "boolean",
          "label": "Dealing with partner",
          "required": false
        },
        {
          "id": "ability_to_have_children",
          "kind": "boolean",
          "label": "Ability to have children",
          "required": false
        },
        {
          "id": "family_health_issues",
          "kind": "boolean",
          "label": "Family health issues",
          "required": false
        }
      ]
    },
    {
      "id": "emotional",
      "title": "Emotional Problems",
      "items": [
        {
          "id": "depression",
          "kind": "boolean",
          "label": "Depression",
          "required": false
        },
        {
          "id": "fears",
          "kind": "boolean",
          "label": "Fears",
          "required": false
        },
        {
          "id": "nervousness",
          "kind": "boolean",
          "label": "Nervousness",
          "required": false
        },
        {
          "id": "sadness",
          "kind": "boolean",
          "label": "Sadness",
          "required": false
        },
        {
          "id": "worry",
          "kind": "boolean",
          "label": "Worry",
          "required": false
        },
        {
          "id": "loss_of_interest",
          "kind": "boolean",
          "label": "Loss of interest in usual activities",
          "required": false
        }
      ]
    },
    {
      "id": "spiritual",
      "title": "Spiritual / Religious Concerns",
      "items": [
        {
          "id": "spiritual_concerns",
          "kind": "boolean",
          "label": "Spiritual or religious concerns",
          "required": false
        }
      ]
    },
    {
      "id": "physical",
      "title": "Physical Problems",
      "items": [
        {
          "id": "appearance",
          "kind": "boolean",
          "label": "Appearance",
          "required": false
        },
        {
          "id": "bathing_dressing",
          "kind": "boolean",
          "label": "Bathing / dressing",
          "required": false
        },
        {
          "id": "breathing",
          "kind": "boolean",
          "label": "Breathing",
          "required": false
        },
        {
          "id": "changes_in_urination",
          "kind": "boolean",
          "label": "Changes in urination",
          "required": false
        },
        {
          "id": "constipation",
          "kind": "boolean",
          "label": "Constipation",
          "required": false
        },
        {
          "id": "diarrhea",
          "kind": "boolean",
          "label": "Diarrhea",
          "required": false
        },
        {
          "id": "eating",
          "kind": "boolean",
          "label": "Eating",
          "required": false
        },
        {
          "id": "fatigue",
          "kind": "boolean",
          "label": "Fatigue",
          "required": false
        },
        {
          "id": "feeling_swollen",
          "kind": "boolean",
          "label": "Feeling swollen",
          "required": false
        },
        {
          "id": "fevers",
          "kind": "boolean",
          "label": "Fevers",
          "required": false
        },
        {
          "id": "getting_around",
          "kind": "boolean",
          "label": "Getting around",
          "required": false
        },
        {
          "id": "indigestion",
          "kind": "boolean",
          "label": "Indigestion",
          "required": false
        },
        {
          "id": "memory_concentration",
          "kind": "boolean",
          "label": "Memory / concentration",
          "required": false
        },
        {
          "id": "mouth_sores",
          "kind": "boolean",
          "label": "Mouth sores",
          "required": false
        },
        {
          "id": "nausea",
          "kind": "boolean",
          "label": "Nausea",
          "required": false
        },
        {
          "id": "nose_dry_congested",
          "kind": "boolean",
          "label": "Nose dry / congested",
          "required": false
        },
        {
          "id": "pain",
          "kind": "boolean",
          "label": "Pain",
          "required": false
        },
        {
          "id": "sexual",
          "kind": "boolean",
          "label": "Sexual",
          "required": false
        },
        {
          "id": "skin_dry_itchy",
          "kind": "boolean",
          "label": "Skin dry / itchy",
          "required": false
        },
        {
          "id": "sleep",
          "kind": "boolean",
          "label": "Sleep",
          "required": false
        },
        {
          "id": "substance_abuse",
          "kind": "boolean",
          "label": "Substance abuse",
          "required": false
        },
        {
          "id": "tingling_hands_feet",
          "kind": "boolean",
          "label": "Tingling in hands / feet",
          "required": false
        }
      ]
    },
    {
      "id": "other",
      "title": "Other Problems",
      "items": [
        {
          "id": "other_problems",
          "kind": "free_text",
          "label": "Other problems",
          "required": false
        }
      ]
    }
  ]
};
