// The survey session: one draft, four ways to walk through it.
//
// Navigation differs per mode; the draft itself is mode-independent, so
// switching modes mid-assessment keeps every answer. View state is pure
// data — the DOM layer renders it without holding logic of its own.

import type {
  AnswerValue,
  Instrument,
  Item,
  ResponseRecord,
  UiMode,
  Violation,
} from './types.js';
import { DEFAULT_MODE } from './types.js';
import { validateAnswer, validateResponse } from './validation.js';

export interface CardView {
  sectionId: string;
  title: string;
  answered: number;
  total: number;
}

export interface JumpButton {
  sectionId: string;
  label: string;
  highlighted: boolean;
}

export interface ItemWidget {
  itemId: string;
  kind: Item['kind'];
  label: string;
  required: boolean;
  min?: number;
  max?: number;
  value: AnswerValue | null;
  error: string | null;
}

export interface PhotoView {
  capture: boolean;
  attachment: string | null;
}

export interface ViewState {
  mode: UiMode;
  sectionId: string | null;
  sectionTitle: string | null;
  /** Navigation affordances exposed in this mode, e.g. ['next', 'back']. */
  navigation: string[];
  /** Advanced mode only: one selectable card per section, any order. */
  cards: CardView[] | null;
  /** Checklist mode only: one button per section, current one highlighted. */
  jumpButtons: JumpButton[] | null;
  /** Item inputs for the current section; always empty in paper mode. */
  itemWidgets: ItemWidget[];
  /** Paper mode only: photo capture/upload affordance. */
  photo: PhotoView | null;
  atFirstSection: boolean;
  atLastSection: boolean;
}

export class SurveySession {
  readonly instrument: Instrument;
  private mode: UiMode;
  private sectionIndex = 0;
  private answers = new Map<string, AnswerValue>();
  private errors = new Map<string, string>();
  private attachment: string | null = null;

  constructor(instrument: Instrument, mode: UiMode = DEFAULT_MODE) {
    if (instrument.sections.length === 0) {
      throw new Error('instrument has no sections');
    }
    this.instrument = instrument;
    this.mode = mode;
  }

  currentMode(): UiMode {
    return this.mode;
  }

  /** Switching modes preserves the draft; only navigation changes. */
  switchMode(mode: UiMode): void {
    this.mode = mode;
  }

  currentSection() {
    return this.instrument.sections[this.sectionIndex]!;
  }

  next(): void {
    if (this.mode === 'paper') {
      throw new Error('paper mode has no section navigation');
    }
    if (this.sectionIndex < this.instrument.sections.length - 1) {
      this.sectionIndex += 1;
    }
  }

  back(): void {
    if (this.mode === 'paper') {
      throw new Error('paper mode has no section navigation');
    }
    if (this.sectionIndex > 0) {
      this.sectionIndex -= 1;
    }
  }

  /** Direct navigation: advanced (cards) and checklist (buttons) only. */
  jumpTo(sectionId: string): void {
    if (this.mode === 'standard' || this.mode === 'paper') {
      throw new Error(`${this.mode} mode does not allow jumping between sections`);
    }
    const index = this.instrument.sections.findIndex((s) => s.id === sectionId);
    if (index < 0) {
      throw new Error(`unknown section ${sectionId}`);
    }
    this.sectionIndex = index;
  }

  /** Record one answer; invalid values surface as inline errors instead. */
  answer(itemId: string, value: AnswerValue): boolean {
    if (this.mode === 'paper') {
      throw new Error('paper mode accepts a photo, not item answers');
    }
    const item = this.findItem(itemId);
    if (!item) {
      throw new Error(`unknown item ${itemId}`);
    }
    const reason = validateAnswer(item, value);
    if (reason) {
      this.errors.set(itemId, reason);
      return false;
    }
    this.errors.delete(itemId);
    this.answers.set(itemId, value);
    return true;
  }

  attachPhoto(reference: string): void {
    if (this.mode !== 'paper') {
      throw new Error('photo attachments belong to paper mode');
    }
    this.attachment = reference;
  }

  answerCount(): number {
    return this.answers.size;
  }

  view(): ViewState {
    const sections = this.instrument.sections;
    const section = this.currentSection();
    const base: ViewState = {
      mode: this.mode,
      sectionId: section.id,
      sectionTitle: section.title,
      navigation: [],
      cards: null,
      jumpButtons: null,
      itemWidgets: this.widgetsFor(section.items),
      photo: null,
      atFirstSection: this.sectionIndex === 0,
      atLastSection: this.sectionIndex === sections.length - 1,
    };
    switch (this.mode) {
      case 'advanced':
        // A modularized card per survey section; tapping a card jumps to it.
        base.navigation = ['select_card'];
        base.cards = sections.map((s) => ({
          sectionId: s.id,
          title: s.title,
          answered: s.items.filter((item) => this.answers.has(item.id)).length,
          total: s.items.length,
        }));
        return base;
      case 'standard':
        base.navigation = ['next', 'back'];
        return base;
      case 'checklist':
        base.navigation = ['next', 'back', 'jump'];
        base.jumpButtons = sections.map((s) => ({
          sectionId: s.id,
          label: s.title,
          highlighted: s.id === section.id,
        }));
        return base;
      case 'paper':
        return {
          ...base,
          sectionId: null,
          sectionTitle: null,
          navigation: ['attach_photo'],
          itemWidgets: [],
          photo: { capture: true, attachment: this.attachment },
        };
    }
  }

  private widgetsFor(items: Item[]): ItemWidget[] {
    return items.map((item) => ({
      itemId: item.id,
      kind: item.kind,
      label: item.label,
      required: item.required,
      min: item.min,
      max: item.max,
      value: this.answers.has(item.id) ? this.answers.get(item.id)! : null,
      error: this.errors.get(item.id) ?? null,
    }));
  }

  private findItem(itemId: string): Item | null {
    for (const section of this.instrument.sections) {
      for (const item of section.items) {
        if (item.id === itemId) {
          return item;
        }
      }
    }
    return null;
  }

  /** Assemble the submission record; the final mode is stamped into it. */
  toResponse(subjectId: string, responseId: string, completedAt: Date): ResponseRecord {
    const answers: Record<string, AnswerValue> = {};
    for (const [key, value] of this.answers) {
      answers[key] = value;
    }
    const record: ResponseRecord = {
      id: responseId,
      instrument_id: this.instrument.id,
      instrument_version: this.instrument.version,
      subject_id: subjectId,
      answers: this.mode === 'paper' ? {} : answers,
      completed_at: completedAt.toISOString().replace('Z', '+00:00'),
      entry_mode: this.mode,
    };
    if (this.attachment) {
      record.attachment = this.attachment;
    }
    return record;
  }

  validate(subjectId: string): Violation[] {
    return validateResponse(
      this.instrument,
      this.toResponse(subjectId, 'draft', new Date(0)),
    );
  }
}
