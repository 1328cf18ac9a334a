// Per-user mode preference. The chosen mode persists and is stamped into
// every submitted response, so preference data accrues per submission.

import type { StorageLike, UiMode } from './types.js';
import { ALL_MODES, DEFAULT_MODE } from './types.js';

export class ModePicker {
  private readonly storage: StorageLike;

  constructor(storage: StorageLike) {
    this.storage = storage;
  }

  private key(userId: string): string {
    return `ruralcare.mode.${userId}`;
  }

  current(userId: string): UiMode {
    const stored = this.storage.getItem(this.key(userId));
    return stored && (ALL_MODES as string[]).includes(stored)
      ? (stored as UiMode)
      : DEFAULT_MODE;
  }

  pick(userId: string, mode: UiMode): UiMode {
    this.storage.setItem(this.key(userId), mode);
    return mode;
  }

  options(): UiMode[] {
    return [...ALL_MODES];
  }
}
