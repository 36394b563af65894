from sklearn.ensemble import RandomForestClassifier


def make_model(seed=0):
    return RandomForestClassifier(n_estimators=50, random_state=seed)
