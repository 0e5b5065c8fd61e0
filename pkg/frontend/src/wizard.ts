// Topic-definition wizard: seed -> judge suggested words -> judge
// boundary documents -> calibrate -> preview. The controller owns the
// session state and talks to the API; the render layer below it only
// paints the current step.

import { ApiClient, withStaleRetry } from './api.js';
import {
  TopicSession,
  WordMark,
  canCalibrate,
  docJudgments,
  emptySession,
  markDocument,
  markWord,
  pendingWords,
  sessionFromTopic,
  stepFor,
} from './session.js';
import type { RankedTopicDoc, TopicPayload } from './types.js';
import { el } from './dom.js';

export class TopicWizard {
  session: TopicSession = emptySession();

  constructor(private api: ApiClient, private suggestionCount = 20,
              private boundaryBand = 10) {}

  get topic(): TopicPayload | null {
    return this.session.topic;
  }

  get step() {
    return stepFor(this.session.topic);
  }

  /** Rebuild the session for an existing topic (reload-safe). */
  async resume(topicId: string): Promise<void> {
    this.session = sessionFromTopic(await this.api.topic(topicId));
    if (this.step === 'words') await this.refreshSuggestions();
    if (this.step === 'boundary') await this.loadBoundary();
  }

  async start(name: string, seed: string): Promise<void> {
    this.session = sessionFromTopic(await this.api.createTopic(name, seed));
    await this.refreshSuggestions();
  }

  async refreshSuggestions(): Promise<string[]> {
    const topic = this.requireTopic();
    const { suggestions } = await this.api.suggestions(topic.topic_id, this.suggestionCount);
    this.session = { ...this.session, suggestions };
    return suggestions;
  }

  mark(word: string, mark: WordMark): void {
    this.session = markWord(this.session, word, mark);
  }

  /** Push accepted/rejected words; the server rebuilds the centroid. */
  async submitWords(): Promise<TopicPayload> {
    const topic = this.requireTopic();
    const { accept, reject } = pendingWords(this.session);
    const updated = await withStaleRetry(
      (version) => this.api.judgeWords(topic.topic_id, version, accept, reject),
      async () => (await this.api.topic(topic.topic_id)).version,
      topic.version,
    );
    this.session = { ...sessionFromTopic(updated) };
    return updated;
  }

  async loadBoundary(): Promise<void> {
    const topic = this.requireTopic();
    const { documents } = await this.api.boundary(topic.topic_id, this.boundaryBand);
    this.session = { ...this.session, boundary: documents, docMarks: {} };
  }

  judge(docId: string, relevant: boolean): void {
    this.session = markDocument(this.session, docId, relevant);
  }

  get readyToCalibrate(): boolean {
    return canCalibrate(this.session);
  }

  async calibrate(): Promise<TopicPayload> {
    const topic = this.requireTopic();
    const judgments = docJudgments(this.session);
    const updated = await withStaleRetry(
      (version) => this.api.calibrate(topic.topic_id, version, judgments),
      async () => (await this.api.topic(topic.topic_id)).version,
      topic.version,
    );
    this.session = { ...this.session, topic: updated };
    return updated;
  }

  /** Before/after: plain keyword hits for the seed vs the calibrated ranking. */
  async preview(k = 10) {
    const topic = this.requireTopic();
    const seed = topic.seed_words.join(' ');
    const before = await this.api.search(seed, null, k);
    const after = await this.api.topicRanking(topic.topic_id, k);
    return { before: before.hits, after: after.documents };
  }

  private requireTopic(): TopicPayload {
    if (!this.session.topic) throw new Error('no topic started yet');
    return this.session.topic;
  }
}

// ----- rendering -----------------------------------------------------------

export function renderWizard(container: HTMLElement, wizard: TopicWizard,
                             rerender: () => void): void {
  container.innerHTML = '';
  container.dataset['step'] = wizard.step;
  switch (wizard.step) {
    case 'seed':
      renderSeedForm(container, wizard, rerender);
      break;
    case 'words':
      renderWordReview(container, wizard, rerender);
      break;
    case 'boundary':
      renderBoundary(container, wizard, rerender);
      break;
    case 'calibrated':
      renderCalibrated(container, wizard, rerender);
      break;
  }
}

function renderError(container: HTMLElement, error: unknown): void {
  const box = el('p', { class: 'error', 'data-role': 'wizard-error' });
  box.textContent = error instanceof Error ? error.message : String(error);
  container.prepend(box);
}

function renderSeedForm(container: HTMLElement, wizard: TopicWizard,
                        rerender: () => void): void {
  const name = el('input', { type: 'text', placeholder: 'topic name', 'data-role': 'topic-name' });
  const seed = el('input', { type: 'text', placeholder: 'seed word', 'data-role': 'topic-seed' });
  const go = el('button', { 'data-role': 'start-topic' });
  go.textContent = 'Suggest related words';
  go.addEventListener('click', () => {
    wizard.start(name.value.trim(), seed.value.trim()).then(rerender, (e) => renderError(container, e));
  });
  container.append(el('h2', {}, 'Define a topic'), name, seed, go);
}

function renderWordReview(container: HTMLElement, wizard: TopicWizard,
                          rerender: () => void): void {
  container.append(el('h2', {}, `Mark related words for "${wizard.topic?.name}"`));
  const list = el('ul', { 'data-role': 'suggestions' });
  for (const word of wizard.session.suggestions) {
    const item = el('li', { 'data-word': word });
    const label = el('span', {}, word);
    const mark = wizard.session.wordMarks[word];
    if (mark) item.dataset['mark'] = mark;
    const accept = el('button', { 'data-role': 'accept' }, 'relevant');
    accept.addEventListener('click', () => {
      wizard.mark(word, 'accept');
      rerender();
    });
    const reject = el('button', { 'data-role': 'reject' }, 'irrelevant');
    reject.addEventListener('click', () => {
      wizard.mark(word, 'reject');
      rerender();
    });
    item.append(label, accept, reject);
    list.append(item);
  }
  const submit = el('button', { 'data-role': 'submit-words' }, 'Find clear hits');
  submit.addEventListener('click', () => {
    wizard
      .submitWords()
      .then(() => wizard.loadBoundary())
      .then(rerender, (e) => renderError(container, e));
  });
  const more = el('button', { 'data-role': 'more-suggestions' }, 'More suggestions');
  more.addEventListener('click', () => {
    wizard.refreshSuggestions().then(rerender, (e) => renderError(container, e));
  });
  container.append(list, submit, more);
}

function renderBoundary(container: HTMLElement, wizard: TopicWizard,
                        rerender: () => void): void {
  container.append(
    el('h2', {}, 'Judge the borderline documents'),
    el('p', {}, 'These sit on the border of relevant and irrelevant; your calls set the cutoff.'),
  );
  const list = el('ul', { 'data-role': 'boundary' });
  for (const doc of wizard.session.boundary) {
    const item = el('li', { 'data-doc': doc.doc_id });
    const judged = wizard.session.docMarks[doc.doc_id];
    if (judged !== undefined) item.dataset['judged'] = String(judged);
    const rel = el('button', { 'data-role': 'judge-relevant' }, 'relevant');
    rel.addEventListener('click', () => {
      wizard.judge(doc.doc_id, true);
      rerender();
    });
    const irr = el('button', { 'data-role': 'judge-irrelevant' }, 'irrelevant');
    irr.addEventListener('click', () => {
      wizard.judge(doc.doc_id, false);
      rerender();
    });
    item.append(el('span', {}, `${doc.doc_id}: ${doc.title}`), rel, irr);
    list.append(item);
  }
  const calibrate = el('button', { 'data-role': 'calibrate' }, 'Calibrate');
  if (!wizard.readyToCalibrate) calibrate.setAttribute('disabled', 'disabled');
  calibrate.addEventListener('click', () => {
    wizard.calibrate().then(rerender, (e) => renderError(container, e));
  });
  container.append(list, calibrate);
}

function renderCalibrated(container: HTMLElement, wizard: TopicWizard,
                          rerender: () => void): void {
  const topic = wizard.topic;
  container.append(el('h2', {}, `Topic "${topic?.name}" is calibrated`));
  const summary = el('p', { 'data-role': 'calibration-summary' });
  summary.textContent =
    `correction ${topic?.correction.toFixed(4)}; judged-relevant mean ` +
    `${topic?.calibration?.mean_relevant_corrected.toFixed(4)}, judged-irrelevant mean ` +
    `${topic?.calibration?.mean_irrelevant_corrected.toFixed(4)}`;
  const preview = el('div', { 'data-role': 'preview' });
  const load = el('button', { 'data-role': 'load-preview' }, 'Show before/after ranking');
  load.addEventListener('click', () => {
    wizard.preview().then(({ before, after }) => {
      preview.innerHTML = '';
      preview.append(
        rankingColumn('Keyword ranking for the seed', before.map((h) => h.doc_id)),
        rankingColumn('Topic ranking after calibration',
                      after.map((d: RankedTopicDoc) => d.doc_id)),
      );
    }, (e) => renderError(container, e));
  });
  container.append(summary, load, preview);
}

function rankingColumn(title: string, docIds: string[]): HTMLElement {
  const box = el('div', { class: 'ranking-column' });
  box.append(el('h3', {}, title));
  const list = el('ol');
  for (const docId of docIds) list.append(el('li', {}, docId));
  box.append(list);
  return box;
}
