// First-login consent flow and later preference changes.
//
// The prompt appears exactly once, on first sign-in; afterwards a settings
// screen calls changeConsent. Choices that cannot reach the service are
// queued in storage and retried on the next flush, like any submission.

import { NetworkError, ServiceClient } from './api.js';
import type { ConsentChoice, StorageLike } from './types.js';

const HEALTH_DATA_TYPES = ['heart_rate', 'steps', 'blood_pressure', 'spo2', 'weight'];

interface PendingConsent {
  subjectId: string;
  choices: ConsentChoice[];
}

export class ConsentManager {
  private readonly api: ServiceClient;
  private readonly storage: StorageLike;

  constructor(api: ServiceClient, storage: StorageLike) {
    this.api = api;
    this.storage = storage;
  }

  private doneKey(userId: string): string {
    return `ruralcare.consent.done.${userId}`;
  }

  private pendingKey(userId: string): string {
    return `ruralcare.consent.pending.${userId}`;
  }

  /** The prompt is shown only when no consent record exists for this user. */
  promptNeeded(userId: string): boolean {
    return this.storage.getItem(this.doneKey(userId)) === null;
  }

  dataTypes(): string[] {
    return [...HEALTH_DATA_TYPES];
  }

  /** Run the first-login flow; afterwards the app proceeds to the main screen. */
  async firstLoginFlow(userId: string, choices: ConsentChoice[]): Promise<void> {
    if (!this.promptNeeded(userId)) {
      throw new Error('consent flow already completed for this user');
    }
    await this.postChoices(userId, choices);
    this.storage.setItem(this.doneKey(userId), new Date().toISOString());
  }

  /** Settings screen: change one preference after the fact. */
  async changeConsent(userId: string, choice: ConsentChoice): Promise<void> {
    await this.postChoices(userId, [choice]);
  }

  private async postChoices(userId: string, choices: ConsentChoice[]): Promise<void> {
    const remaining: ConsentChoice[] = [];
    for (const choice of choices) {
      try {
        await this.api.setConsent(userId, choice.dataType, choice.decision);
      } catch (error) {
        if (error instanceof NetworkError) {
          remaining.push(choice);
          continue;
        }
        throw error;
      }
    }
    if (remaining.length > 0) {
      this.storage.setItem(
        this.pendingKey(userId),
        JSON.stringify({ subjectId: userId, choices: remaining } satisfies PendingConsent),
      );
    }
  }

  pendingChoices(userId: string): ConsentChoice[] {
    const raw = this.storage.getItem(this.pendingKey(userId));
    if (!raw) {
      return [];
    }
    try {
      return (JSON.parse(raw) as PendingConsent).choices;
    } catch {
      return [];
    }
  }

  /** Retry queued consent changes once connectivity returns. */
  async flushPending(userId: string): Promise<number> {
    const pending = this.pendingChoices(userId);
    if (pending.length === 0) {
      return 0;
    }
    this.storage.removeItem(this.pendingKey(userId));
    await this.postChoices(userId, pending);
    return pending.length - this.pendingChoices(userId).length;
  }
}
