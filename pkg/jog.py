from jogger.tasks import DocsTask, LintTask

tasks = {
    'test': 'coverage run -m unittest discover -s tests -t . && coverage report',
    'lint': LintTask,
    'docs': DocsTask,
}
