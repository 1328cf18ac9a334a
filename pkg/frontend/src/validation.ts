// Client-side validation mirroring the service's rules, so bad input is
// caught inline before anything is queued or sent.

import type { AnswerValue, Instrument, Item, ResponseRecord, Violation } from './types.js';

export function validateAnswer(item: Item, value: AnswerValue): string | null {
  switch (item.kind) {
    case 'scale':
      if (typeof value !== 'number' || !Number.isInteger(value)) {
        return 'scale answer must be an integer';
      }
      if (value < (item.min ?? 0) || value > (item.max ?? 0)) {
        return `out of range [${item.min}, ${item.max}]`;
      }
      return null;
    case 'boolean':
      return typeof value === 'boolean' ? null : 'boolean answer must be true or false';
    case 'free_text':
      return typeof value === 'string' ? null : 'free text answer must be a string';
  }
}

export function validateResponse(
  instrument: Instrument,
  record: ResponseRecord,
): Violation[] {
  const violations: Violation[] = [];
  const items = new Map<string, Item>();
  for (const section of instrument.sections) {
    for (const item of section.items) {
      items.set(item.id, item);
    }
  }

  for (const [itemId, value] of Object.entries(record.answers)) {
    const item = items.get(itemId);
    if (!item) {
      violations.push({ itemId, reason: 'unknown item' });
      continue;
    }
    const reason = validateAnswer(item, value);
    if (reason) {
      violations.push({ itemId, reason });
    }
  }

  if (record.entry_mode === 'paper') {
    if (!record.attachment) {
      violations.push({ itemId: null, reason: 'paper mode requires an attachment' });
    }
  } else {
    for (const [itemId, item] of items) {
      if (item.required && !(itemId in record.answers)) {
        violations.push({ itemId, reason: 'missing required item' });
      }
    }
  }
  return violations;
}

/** Thermometer reading and problem count, used to pick bundle priority. */
export function distressFlagged(
  instrument: Instrument,
  answers: Record<string, AnswerValue>,
  threshold = 4,
): boolean {
  for (const section of instrument.sections) {
    for (const item of section.items) {
      if (item.kind === 'scale' && item.id in answers) {
        const value = answers[item.id];
        return typeof value === 'number' && value >= threshold;
      }
    }
  }
  return false;
}
