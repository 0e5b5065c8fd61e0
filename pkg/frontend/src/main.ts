// App shell: three tabs over the same API client. Served statically by
// the search service, so same-origin requests need no base URL.

import { ApiClient } from './api.js';
import { RoleEditor } from './roles.js';
import { SearchConsole } from './search.js';
import { TopicWizard, renderWizard } from './wizard.js';
import { el } from './dom.js';

const api = new ApiClient('');

function mountTabs(root: HTMLElement): void {
  const nav = el('nav');
  const panes: Record<string, HTMLElement> = {
    search: el('section', { id: 'search-pane' }),
    topics: el('section', { id: 'topics-pane' }),
    roles: el('section', { id: 'roles-pane' }),
  };
  const show = (name: string) => {
    for (const [key, pane] of Object.entries(panes)) {
      pane.style.display = key === name ? 'block' : 'none';
    }
  };
  for (const name of Object.keys(panes)) {
    const button = el('button', { 'data-tab': name }, name);
    button.addEventListener('click', () => show(name));
    nav.append(button);
  }
  root.append(nav, ...Object.values(panes));
  show('search');

  const console_ = new SearchConsole(api, panes['search']!);
  void console_.mount();

  const wizard = new TopicWizard(api);
  const repaint = () => renderWizard(panes['topics']!, wizard, repaint);
  repaint();

  const editor = new RoleEditor(api, panes['roles']!);
  void editor.mount();
}

const root = document.getElementById('app');
if (root) mountTabs(root);
