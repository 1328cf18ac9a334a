// DOM glue: renders SurveySession view state and wires user actions.
// All behavior lives in the session/queue/consent classes; this layer only
// paints state and forwards events, so the contracts stay testable headless.

import { ServiceClient } from './api.js';
import { ConsentManager } from './consent.js';
import { DT_INSTRUMENT } from './instrument-data.js';
import { SurveySession, type ViewState } from './modes.js';
import { ModePicker } from './prefs.js';
import { SubmissionManager, ValidationBlocked } from './submit.js';
import type { UiMode } from './types.js';

interface AppContext {
  api: ServiceClient;
  userId: string;
  session: SurveySession;
  submissions: SubmissionManager;
  consent: ConsentManager;
  picker: ModePicker;
}

export function startApp(root: HTMLElement, baseUrl: string): void {
  const api = new ServiceClient(baseUrl);
  root.innerHTML = `
    <form id="login">
      <h1>Distress screening</h1>
      <input name="user" placeholder="user id" required>
      <input name="password" type="password" placeholder="password" required>
      <button type="submit">Sign in</button>
      <p id="login-error" class="error"></p>
    </form>`;
  const form = root.querySelector<HTMLFormElement>('#login')!;
  form.addEventListener('submit', async (event) => {
    event.preventDefault();
    const data = new FormData(form);
    const userId = String(data.get('user'));
    try {
      await api.login(userId, String(data.get('password')));
    } catch (error) {
      root.querySelector('#login-error')!.textContent = String(error);
      return;
    }
    const storage = window.localStorage;
    const context: AppContext = {
      api,
      userId,
      session: new SurveySession(DT_INSTRUMENT, new ModePicker(storage).current(userId)),
      submissions: new SubmissionManager(api, storage, `${userId}-browser`),
      consent: new ConsentManager(api, storage),
      picker: new ModePicker(storage),
    };
    window.addEventListener('online', () => void context.submissions.flush());
    if (context.consent.promptNeeded(userId)) {
      renderConsentFlow(root, context);
    } else {
      renderSurvey(root, context);
    }
  });
}

function renderConsentFlow(root: HTMLElement, context: AppContext): void {
  const types = context.consent.dataTypes();
  root.innerHTML = `
    <h1>Health data access</h1>
    <p>Choose which sensor data this app may collect. You can change this
       later in settings.</p>
    <ul>${types
      .map(
        (t) => `<li><label>${t}
          <select data-type="${t}">
            <option value="denied">deny</option>
            <option value="granted">allow</option>
          </select></label></li>`,
      )
      .join('')}</ul>
    <button id="consent-done">Continue</button>`;
  root.querySelector('#consent-done')!.addEventListener('click', async () => {
    const choices = types.map((dataType) => ({
      dataType,
      decision: root.querySelector<HTMLSelectElement>(`select[data-type="${dataType}"]`)!
        .value as 'granted' | 'denied',
    }));
    await context.consent.firstLoginFlow(context.userId, choices);
    renderSurvey(root, context);
  });
}

function renderSurvey(root: HTMLElement, context: AppContext): void {
  const view = context.session.view();
  root.innerHTML = `
    <header>
      <label>mode
        <select id="mode">${context.picker
          .options()
          .map((m) => `<option ${m === view.mode ? 'selected' : ''}>${m}</option>`)
          .join('')}</select>
      </label>
      <span id="pending">${context.submissions.pendingCount()} queued</span>
    </header>
    <main id="survey"></main>
    <footer id="controls"></footer>
    <p id="status"></p>`;
  root.querySelector<HTMLSelectElement>('#mode')!.addEventListener('change', (event) => {
    const mode = (event.target as HTMLSelectElement).value as UiMode;
    context.picker.pick(context.userId, mode);
    context.session.switchMode(mode);
    renderSurvey(root, context);
  });
  paintSection(root, context, view);
  paintControls(root, context, view);
}

function paintSection(root: HTMLElement, context: AppContext, view: ViewState): void {
  const main = root.querySelector<HTMLElement>('#survey')!;
  if (view.photo) {
    main.innerHTML = `
      <h2>Paper form upload</h2>
      <input id="photo" type="file" accept="image/*" capture="environment">
      <p>${view.photo.attachment ? `attached: ${view.photo.attachment}` : 'no photo yet'}</p>`;
    main.querySelector<HTMLInputElement>('#photo')!.addEventListener('change', (event) => {
      const file = (event.target as HTMLInputElement).files?.[0];
      if (file) {
        context.session.attachPhoto(file.name);
        renderSurvey(root, context);
      }
    });
    return;
  }
  const widgets = view.itemWidgets
    .map((w) => {
      if (w.kind === 'scale') {
        return `<label>${w.label}
          <input data-item="${w.itemId}" type="number" min="${w.min}" max="${w.max}"
                 value="${w.value ?? ''}"></label>
          <span class="error">${w.error ?? ''}</span>`;
      }
      if (w.kind === 'boolean') {
        return `<label><input data-item="${w.itemId}" type="checkbox"
                 ${w.value === true ? 'checked' : ''}> ${w.label}</label>`;
      }
      return `<label>${w.label}
        <textarea data-item="${w.itemId}">${w.value ?? ''}</textarea></label>`;
    })
    .join('\n');
  main.innerHTML = `<h2>${view.sectionTitle}</h2>${widgets}`;
  for (const input of main.querySelectorAll<HTMLElement>('[data-item]')) {
    input.addEventListener('change', (event) => {
      const element = event.target as HTMLInputElement;
      const itemId = element.dataset.item!;
      const widget = view.itemWidgets.find((w) => w.itemId === itemId)!;
      const value =
        widget.kind === 'scale'
          ? Number(element.value)
          : widget.kind === 'boolean'
            ? element.checked
            : element.value;
      context.session.answer(itemId, value);
      renderSurvey(root, context);
    });
  }
}

function paintControls(root: HTMLElement, context: AppContext, view: ViewState): void {
  const footer = root.querySelector<HTMLElement>('#controls')!;
  const parts: string[] = [];
  if (view.navigation.includes('back')) {
    parts.push(`<button id="back" ${view.atFirstSection ? 'disabled' : ''}>Back</button>`);
  }
  if (view.navigation.includes('next')) {
    parts.push(`<button id="next" ${view.atLastSection ? 'disabled' : ''}>Next</button>`);
  }
  if (view.cards) {
    parts.push(view.cards
      .map((c) => `<button class="card" data-section="${c.sectionId}">
        ${c.title} (${c.answered}/${c.total})</button>`)
      .join(''));
  }
  if (view.jumpButtons) {
    parts.push(view.jumpButtons
      .map((b) => `<button class="jump ${b.highlighted ? 'highlighted' : ''}"
        data-section="${b.sectionId}">${b.label}</button>`)
      .join(''));
  }
  parts.push('<button id="submit">Submit</button>');
  footer.innerHTML = parts.join('\n');

  footer.querySelector('#back')?.addEventListener('click', () => {
    context.session.back();
    renderSurvey(root, context);
  });
  footer.querySelector('#next')?.addEventListener('click', () => {
    context.session.next();
    renderSurvey(root, context);
  });
  for (const button of footer.querySelectorAll<HTMLElement>('[data-section]')) {
    button.addEventListener('click', () => {
      context.session.jumpTo(button.dataset.section!);
      renderSurvey(root, context);
    });
  }
  footer.querySelector('#submit')!.addEventListener('click', async () => {
    const status = root.querySelector<HTMLElement>('#status')!;
    const record = context.session.toResponse(
      context.userId,
      crypto.randomUUID(),
      new Date(),
    );
    try {
      const outcome = await context.submissions.submit(context.session.instrument, record);
      status.textContent =
        outcome === 'sent' ? 'Submitted to the clinic.' : 'Saved; will send when connected.';
    } catch (error) {
      status.textContent =
        error instanceof ValidationBlocked
          ? `Please fix: ${error.message}`
          : `Submission failed: ${String(error)}`;
      renderSurvey(root, context);
    }
  });
}
