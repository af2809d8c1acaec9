# Open the URL of the repository
url = "github.com/"
